"""Kernel backend selection: compiled extension if available, else pure Python.

Set C4DECOMP_PURE=1 to force the pure-Python fallback.  Both backends
implement the same contracts; the greedy colourer is bit-identical across
backends.
"""

from __future__ import annotations

import os
from typing import List, Optional, Sequence, Tuple

from . import _kernels_py

_speedups = None
if not os.environ.get("C4DECOMP_PURE"):
    try:
        from . import _speedups as _speedups  # type: ignore[no-redef]
    except ImportError:
        _speedups = None

BACKEND = "compiled" if _speedups is not None else "pure"

if _speedups is not None:
    import numpy as _np


def _to_csr(adj: Sequence[Sequence[int]]):
    indptr = _np.zeros(len(adj) + 1, dtype=_np.int32)
    for v, nbrs in enumerate(adj):
        indptr[v + 1] = indptr[v] + len(nbrs)
    indices = _np.empty(int(indptr[-1]), dtype=_np.int32)
    pos = 0
    for nbrs in adj:
        for w in nbrs:
            indices[pos] = w
            pos += 1
    return indptr, indices


def find_c4_adj(adj: Sequence[Sequence[int]]) -> Optional[Tuple[int, int, int, int]]:
    """Some 4-cycle (w, x, y, z) with edges wx, xy, yz, zw, or None."""
    if _speedups is not None:
        indptr, indices = _to_csr(adj)
        hit = _speedups.find_c4_csr(indptr, indices)
        return None if hit is None else tuple(int(x) for x in hit)
    return _kernels_py.find_c4_adj(adj)


def find_c4_edges(n: int, edges: Sequence[Tuple[int, int]]) -> Optional[Tuple[int, int, int, int]]:
    """Like find_c4_adj, but takes an edge list (CSR built in the kernel)."""
    if _speedups is not None:
        us = _np.fromiter((e[0] for e in edges), dtype=_np.int32, count=len(edges))
        vs = _np.fromiter((e[1] for e in edges), dtype=_np.int32, count=len(edges))
        hit = _speedups.find_c4_edges(n, us, vs)
        return None if hit is None else tuple(int(x) for x in hit)
    return _kernels_py.find_c4_adj(adj_from_edges(n, edges))


def greedy_c4_colouring(n: int, edges: Sequence[Tuple[int, int]]) -> List[int]:
    """First-fit C4-free edge colouring; identical output on both backends."""
    if _speedups is not None:
        us = _np.fromiter((e[0] for e in edges), dtype=_np.int32, count=len(edges))
        vs = _np.fromiter((e[1] for e in edges), dtype=_np.int32, count=len(edges))
        return [int(c) for c in _speedups.greedy_c4_colouring(n, us, vs)]
    return _kernels_py.greedy_c4_colouring(n, edges)


def find_c4_in_classes(
    n: int, us, vs, cols
) -> List[Tuple[int, Tuple[int, int, int, int]]]:
    """(colour, witness 4-cycle) for every colour class of the edge arrays
    that contains one, in increasing colour order, one cycle per class."""
    if _speedups is not None:
        hits = _speedups.find_c4_grouped(
            n, _np.ascontiguousarray(us, dtype=_np.int32),
            _np.ascontiguousarray(vs, dtype=_np.int32),
            _np.ascontiguousarray(cols, dtype=_np.int32),
        )
        return [(int(c), tuple(int(x) for x in cyc)) for c, cyc in hits]
    by_class = {}
    for u, v, c in zip(list(us), list(vs), list(cols)):
        by_class.setdefault(int(c), []).append((int(u), int(v)))
    out = []
    for c in sorted(by_class):
        hit = _kernels_py.find_c4_adj(adj_from_edges(n, by_class[c]))
        if hit is not None:
            out.append((c, hit))
    return out


def adj_from_edges(n: int, edges: Sequence[Tuple[int, int]]) -> List[List[int]]:
    adj: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj
