"""Independent verifiers and exact brute-force oracles for tiny instances."""

from __future__ import annotations

import heapq
import math
import random as _random
from functools import lru_cache
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Set, Tuple

from . import kernels
from .graphs import EdgeColouring, Graph, VertexColouring

DEFAULT_EX_CAP = 10
DEFAULT_PHI_EDGE_CAP = 15


class OracleCapExceeded(ValueError):
    """Instance is too large for the exact oracle."""


@dataclass
class VerificationReport:
    violations: List[Tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "OK"
        kind, witness = self.violations[0]
        return f"FAIL kind={kind} witness={witness}"

    def text_block(self) -> str:
        if self.ok:
            return "OK: no violations\n"
        lines = [f"FAIL: {len(self.violations)} violation(s)"]
        for kind, witness in self.violations:
            lines.append(f"  {kind}: {witness}")
        return "\n".join(lines) + "\n"


def find_c4(graph: Graph) -> Optional[Tuple[int, int, int, int]]:
    """Some 4-cycle (w, x, y, z) with edges wx, xy, yz, zw, else None."""
    return kernels.find_c4_adj(graph.adj)


def find_c4_in_edges(n: int, edges) -> Optional[Tuple[int, int, int, int]]:
    return kernels.find_c4_edges(n, list(edges))


def verify_c4_free_colouring(graph: Graph, colouring: EdgeColouring) -> VerificationReport:
    """ok iff every colour class, as a spanning subgraph, has no 4-cycle."""
    colouring.check_total()
    report = VerificationReport()
    us, vs, cols = colouring.edge_arrays()
    for c, cyc in kernels.find_c4_in_classes(graph.n, us, vs, cols):
        report.violations.append(("c4_in_class", (c, cyc)))
    return report


def verify_frugal_proper(h: Graph, chi: VertexColouring) -> VerificationReport:
    """ok iff chi is proper and 1-frugal on H (total on V(H) required)."""
    if not chi.is_total_on(range(h.n)):
        raise ValueError("vertex colouring is not total on V(H)")
    report = VerificationReport()
    for u, v in h.edges:
        if chi.colour_of[u] == chi.colour_of[v]:
            report.violations.append(("monochromatic_edge", (u, v)))
    for v in range(h.n):
        by_colour: Dict[int, int] = {}
        for w in h.adj[v]:
            c = chi.colour_of[w]
            if c in by_colour:
                report.violations.append(("frugality", (v, c, (by_colour[c], w))))
            else:
                by_colour[c] = w
    return report


def _has_c4_with_edge(adj_masks: List[int], u: int, v: int) -> bool:
    # Adding uv closes a C4 iff some w in N(v)\{u} already shares another
    # common neighbour with u (besides v itself).
    mv = adj_masks[v] & ~(1 << u)
    mu = adj_masks[u] & ~(1 << v)
    w_bits = mv
    while w_bits:
        low = w_bits & -w_bits
        w = low.bit_length() - 1
        w_bits ^= low
        if adj_masks[w] & mu & ~(1 << v):
            return True
    return False


def _greedy_c4_free_count(n: int, restarts: int = 200) -> int:
    """Best-of-restarts greedy lower bound; seeds the exact search."""
    rng = _random.Random(0)
    all_edges = list(combinations(range(n), 2))
    best = 0
    for trial in range(restarts):
        if trial:
            rng.shuffle(all_edges)
        masks = [0] * n
        count = 0
        for u, v in all_edges:
            if not _has_c4_with_edge(masks, u, v):
                masks[u] |= 1 << v
                masks[v] |= 1 << u
                count += 1
        best = max(best, count)
    return best


def exact_ex_c4(n: int, cap: int = DEFAULT_EX_CAP) -> int:
    """Maximum edges of a C4-free graph on n vertices, by branch and bound.

    Vertices are added one at a time; vertex k branches over its
    back-neighbourhoods N in {0..k-1}.  C4-freeness is exactly "every
    vertex pair has at most one common neighbour", tracked in a pair
    table.  Each cherry (2-path) occupies a distinct pair, so at most
    binomial(n, 2) cherries fit overall; the unused pair capacity bounds
    the edges the remaining vertices can still contribute.
    """
    if n > cap:
        raise OracleCapExceeded(f"n={n} exceeds the exact cap {cap}")
    if n <= 1:
        return 0
    return _exact_ex_c4_search(n)


@lru_cache(maxsize=None)
def _exact_ex_c4_search(n: int) -> int:
    common = [[0] * n for _ in range(n)]
    conf = [0] * n  # bit b of conf[v] set iff common[v][b] >= 1
    adjmask = [0] * n
    adjdeg = [0] * n
    capacity = n * (n - 1) // 2
    best = _greedy_c4_free_count(n)

    def max_gain(k: int, cap_left: int) -> int:
        # Every new edge has an endpoint in {k..n-1} and raises two final
        # degrees; raising a degree from f to f+1 creates f new cherries.
        # Relax to: maximise total degree increments subject to the cherry
        # capacity and per-vertex headroom, growing the smallest final
        # degree first (the cherry cost is convex).
        # Prefix vertices can only gain edges towards the n-k future ones.
        degs = sorted(adjdeg[:k])
        room = [n - k] * k + [n - 1] * (n - k)
        degs.extend([0] * (n - k))
        increments = 0
        heap = list(zip(degs, range(n)))
        heapq.heapify(heap)
        while heap:
            f, i = heapq.heappop(heap)
            if f > cap_left:
                break
            if room[i] == 0:
                continue
            cap_left -= f
            room[i] -= 1
            increments += 1
            heapq.heappush(heap, (f + 1, i))
        return increments // 2

    def place(k: int, count: int, used: int, prev_mask: int) -> None:
        nonlocal best
        if k == n:
            best = max(best, count)
            return
        if count + max_gain(k, capacity - used) <= best:
            return

        def bits(m: int):
            while m:
                low = m & -m
                yield low.bit_length() - 1
                m ^= low

        def extend(i: int, mask: int, size: int, spent: int) -> None:
            # Vertices k-1 and k are interchangeable when k-1 is not a
            # neighbour of k; demand non-decreasing masks in that case so
            # each graph is generated from one canonical ordering only.
            if k == 0 or mask & (1 << (k - 1)) or mask >= prev_mask:
                place(k + 1, count + size, used + spent, mask)
            conf_k = conf[k]
            for e in range(i, k):
                if conf[e] & mask or conf_k & adjmask[e]:
                    continue
                delta = size + adjdeg[e]
                bit_e, bit_k = 1 << e, 1 << k
                for a in bits(mask):
                    common[e][a] += 1
                    common[a][e] += 1
                    conf[e] |= 1 << a
                    conf[a] |= bit_e
                for x in bits(adjmask[e]):
                    common[x][k] += 1
                    common[k][x] += 1
                    conf[x] |= bit_k
                    conf[k] |= 1 << x
                adjmask[e] |= bit_k
                adjmask[k] |= bit_e
                adjdeg[e] += 1
                adjdeg[k] += 1
                extend(e + 1, mask | bit_e, size + 1, spent + delta)
                adjdeg[e] -= 1
                adjdeg[k] -= 1
                adjmask[k] &= ~bit_e
                adjmask[e] &= ~bit_k
                for a in bits(mask):
                    common[e][a] -= 1
                    common[a][e] -= 1
                    if not common[e][a]:
                        conf[e] &= ~(1 << a)
                        conf[a] &= ~bit_e
                for x in bits(adjmask[e]):
                    common[x][k] -= 1
                    common[k][x] -= 1
                    if not common[x][k]:
                        conf[x] &= ~bit_k
                        conf[k] &= ~(1 << x)
                conf_k = conf[k]

        extend(0, 0, 0, 0)

    place(0, 0, 0, 0)
    return best


def ex_c4_upper_bound(n: int) -> int:
    """Closed-form upper bound ex(n, C4) <= n(1 + sqrt(4n-3))/4, rounded up.

    Integer arithmetic only; rounding up keeps it a valid upper bound.
    """
    if n <= 1:
        return 0
    s = math.isqrt(4 * n - 3)
    if s * s < 4 * n - 3:
        s += 1
    return -(-(n * (1 + s)) // 4)


def phi_lower_bound(delta: int, ex_value: Optional[int] = None, cap: int = DEFAULT_EX_CAP) -> int:
    """Valid lower bound on phi_C4(K_{delta+1}) from the class-size quotient."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    n = delta + 1
    if ex_value is None:
        ex_value = exact_ex_c4(n) if n <= cap else ex_c4_upper_bound(n)
    total = n * (n - 1) // 2
    return -(-total // ex_value)


def exact_phi_c4(
    graph: Graph,
    max_colours: int = 8,
    edge_cap: int = DEFAULT_PHI_EDGE_CAP,
) -> int:
    """Exact minimum class count of a C4-free edge colouring, by backtracking.

    The first edge's colour is fixed and each edge may only open one fresh
    class (colour-symmetry pruning).  Classes are additionally capped at
    ex(n, C4) edges, which settles infeasibility of small m quickly.
    """
    m_edges = graph.num_edges()
    if m_edges > edge_cap:
        raise OracleCapExceeded(f"{m_edges} edges exceed the oracle cap {edge_cap}")
    if m_edges == 0:
        return 0
    return exact_phi_c4_witness(graph, max_colours=max_colours, edge_cap=edge_cap)[0]


def exact_phi_c4_witness(
    graph: Graph,
    max_colours: int = 8,
    edge_cap: int = DEFAULT_PHI_EDGE_CAP,
) -> Tuple[int, Dict[Tuple[int, int], int]]:
    """Like exact_phi_c4, but also returns an optimal colour assignment."""
    m_edges = graph.num_edges()
    if m_edges > edge_cap:
        raise OracleCapExceeded(f"{m_edges} edges exceed the oracle cap {edge_cap}")
    if m_edges == 0:
        return 0, {}
    edges = _order_edges_for_search(graph)
    # The class-size cap only prunes; the closed-form bound is as valid as
    # the exact value and avoids the exponential search at n = 9, 10.
    ex_cap = exact_ex_c4(graph.n) if graph.n <= 8 else ex_c4_upper_bound(graph.n)
    for m in range(1, max_colours + 1):
        if m * ex_cap < m_edges:
            continue
        assignment = _colourable(graph.n, edges, m, ex_cap)
        if assignment is not None:
            return m, assignment
    raise OracleCapExceeded(f"no C4-free colouring found within {max_colours} colours")


def _order_edges_for_search(graph: Graph) -> List[Tuple[int, int]]:
    # Highest-degree endpoints first: conflicts show up early.
    return sorted(
        graph.edges,
        key=lambda e: -(graph.degree(e[0]) + graph.degree(e[1])),
    )


def _colourable(
    n: int, edges: List[Tuple[int, int]], m: int, ex_cap: int
) -> Optional[Dict[Tuple[int, int], int]]:
    masks = [[0] * n for _ in range(m)]
    sizes = [0] * m
    assigned: Dict[Tuple[int, int], int] = {}

    def dfs(idx: int, used: int) -> bool:
        if idx == len(edges):
            return True
        u, v = edges[idx]
        limit = min(m, used + 1)
        for c in range(limit):
            if sizes[c] >= ex_cap:
                continue
            if _has_c4_with_edge(masks[c], u, v):
                continue
            masks[c][u] |= 1 << v
            masks[c][v] |= 1 << u
            sizes[c] += 1
            assigned[(u, v)] = c
            if dfs(idx + 1, max(used, c + 1)):
                return True
            del assigned[(u, v)]
            sizes[c] -= 1
            masks[c][u] &= ~(1 << v)
            masks[c][v] &= ~(1 << u)
        return False

    return assigned if dfs(0, 0) else None


def is_sidon(s: Iterable[int], m: int) -> bool:
    """True iff all pair sums a+b mod m (a <= b in S) are distinct."""
    elems = sorted(set(x % m for x in s))
    seen: Set[int] = set()
    for i, a in enumerate(elems):
        for b in elems[i:]:
            t = (a + b) % m
            if t in seen:
                return False
            seen.add(t)
    return True


def sum_graph(s: Iterable[int], m: int) -> Graph:
    """Graph on Z_m with edges {i, j}, i != j, whose sum mod m lies in S."""
    sset = set(x % m for x in s)
    edges = [
        (i, j)
        for i in range(m)
        for j in range(i + 1, m)
        if (i + j) % m in sset
    ]
    return Graph(m, edges)
