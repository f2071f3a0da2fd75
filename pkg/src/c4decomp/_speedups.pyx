# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hot kernels: C4 detection and the greedy first-fit colourer."""

from cython.operator cimport dereference
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map

import numpy as np

cimport numpy as cnp


def find_c4_csr(cnp.int32_t[::1] indptr, cnp.int32_t[::1] indices):
    """Some 4-cycle (w, x, y, z) in the CSR graph, or None."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef unordered_map[long long, int] seen
    cdef long long key
    cdef Py_ssize_t v, i, j
    cdef int x, y
    seen.reserve(64)
    for v in range(n):
        for i in range(indptr[v], indptr[v + 1]):
            x = indices[i]
            for j in range(i + 1, indptr[v + 1]):
                y = indices[j]
                key = (<long long> x) * n + y
                it = seen.find(key)
                if it != seen.end():
                    return (x, dereference(it).second, y, <int> v)
                seen[key] = <int> v
    return None


def find_c4_edges(int n, cnp.int32_t[::1] us, cnp.int32_t[::1] vs):
    """Some 4-cycle (w, x, y, z) in the graph given as edge arrays, or None.

    Builds the CSR form internally (counting sort), then hashes common
    neighbour pairs exactly like find_c4_csr.
    """
    cdef Py_ssize_t m = us.shape[0]
    cdef vector[int] indptr = vector[int](n + 1, 0)
    cdef vector[int] indices = vector[int](2 * m)
    cdef vector[int] pos = vector[int](n, 0)
    cdef Py_ssize_t e, v, i, j
    cdef int a, b, x, y
    for e in range(m):
        indptr[us[e] + 1] += 1
        indptr[vs[e] + 1] += 1
    for v in range(n):
        indptr[v + 1] += indptr[v]
        pos[v] = indptr[v]
    for e in range(m):
        a = us[e]
        b = vs[e]
        indices[pos[a]] = b
        pos[a] += 1
        indices[pos[b]] = a
        pos[b] += 1
    cdef unordered_map[long long, int] seen
    cdef long long key
    seen.reserve(64)
    for v in range(n):
        for i in range(indptr[v], indptr[v + 1]):
            x = indices[i]
            for j in range(i + 1, indptr[v + 1]):
                y = indices[j]
                key = (<long long> x) * n + y
                it = seen.find(key)
                if it != seen.end():
                    return (x, dereference(it).second, y, <int> v)
                seen[key] = <int> v
    return None


def find_c4_grouped(int n, cnp.int32_t[::1] us, cnp.int32_t[::1] vs,
                    cnp.int32_t[::1] cols):
    """(colour, 4-cycle) for every colour class that contains one.

    One counting sort groups the edges by colour; each class then gets the
    same CSR + common-neighbour-pair scan as find_c4_edges.  Results come
    back in increasing colour order, at most one cycle per class.
    """
    cdef Py_ssize_t m = us.shape[0]
    cdef int C = 0
    cdef Py_ssize_t e, i, j, k, lo, hi
    cdef int a, b, x, y, c
    cdef Py_ssize_t v
    for e in range(m):
        if cols[e] >= C:
            C = cols[e] + 1
    out = []
    if C == 0:
        return out
    cdef vector[int] cstart = vector[int](C + 2, 0)
    cdef vector[int] order = vector[int](m)
    for e in range(m):
        cstart[cols[e] + 2] += 1
    for c in range(C):
        cstart[c + 2] += cstart[c + 1]
    for e in range(m):
        order[cstart[cols[e] + 1]] = <int> e
        cstart[cols[e] + 1] += 1
    cdef vector[int] indptr = vector[int](n + 1, 0)
    cdef vector[int] pos = vector[int](n, 0)
    cdef vector[int] indices
    cdef unordered_map[long long, int] seen
    cdef long long key
    cdef bint found
    for c in range(C):
        lo = cstart[c]
        hi = cstart[c + 1]
        if hi - lo < 4:
            continue
        indptr.assign(n + 1, 0)
        for k in range(lo, hi):
            e = order[k]
            indptr[us[e] + 1] += 1
            indptr[vs[e] + 1] += 1
        for v in range(n):
            indptr[v + 1] += indptr[v]
            pos[v] = indptr[v]
        indices.assign(2 * (hi - lo), 0)
        for k in range(lo, hi):
            e = order[k]
            a = us[e]
            b = vs[e]
            indices[pos[a]] = b
            pos[a] += 1
            indices[pos[b]] = a
            pos[b] += 1
        seen.clear()
        found = False
        for v in range(n):
            for i in range(indptr[v], indptr[v + 1]):
                x = indices[i]
                for j in range(i + 1, indptr[v + 1]):
                    y = indices[j]
                    key = (<long long> x) * n + y
                    it = seen.find(key)
                    if it != seen.end():
                        out.append((c, (x, dereference(it).second, y, <int> v)))
                        found = True
                        break
                    seen[key] = <int> v
                if found:
                    break
            if found:
                break
    return out


cdef bint _closes_c4(vector[vector[int]]& adj, int u, int v,
                     vector[int]& mark, int stamp) noexcept:
    # A new C4 through uv needs a u-x-w-v path inside the class.  The
    # neighbours of v are stamped first, so the walk over length-2 paths
    # from u tests membership in O(1).
    cdef Py_ssize_t i, j
    cdef int x, w
    for i in range(adj[v].size()):
        mark[adj[v][i]] = stamp
    for i in range(adj[u].size()):
        x = adj[u][i]
        for j in range(adj[x].size()):
            w = adj[x][j]
            if w != u and mark[w] == stamp:
                return True
    return False


def greedy_c4_colouring(int n, cnp.int32_t[::1] us, cnp.int32_t[::1] vs):
    """First-fit: each edge takes the smallest class not closing a C4."""
    cdef vector[vector[vector[int]]] class_adj
    cdef vector[int] mark = vector[int](n, 0)
    cdef int stamp = 0
    cdef Py_ssize_t m = us.shape[0]
    cdef cnp.ndarray[cnp.int32_t, ndim=1] colours = np.empty(m, dtype=np.int32)
    cdef Py_ssize_t e
    cdef int u, v
    cdef size_t c
    for e in range(m):
        u = us[e]
        v = vs[e]
        c = 0
        while c < class_adj.size():
            stamp += 1
            if not _closes_c4(class_adj[c], u, v, mark, stamp):
                break
            c += 1
        if c == class_adj.size():
            class_adj.push_back(vector[vector[int]](n))
        class_adj[c][u].push_back(v)
        class_adj[c][v].push_back(u)
        colours[e] = <cnp.int32_t> c
    return colours
