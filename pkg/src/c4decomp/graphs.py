"""Core graph representation, text I/O and random generators."""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

import numpy as np

Edge = Tuple[int, int]


class GraphFormatError(ValueError):
    """Raised on malformed edge-list or colouring input."""


class GenerationError(RuntimeError):
    """Raised when a random generator exhausts its retry budget."""


def _canonical(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Immutable after construction.  Adjacency is kept as sorted neighbour
    lists; edge membership is a binary search.
    """

    __slots__ = ("n", "edges", "adj", "_packed")

    def __init__(self, n: int, edges: Iterable[Edge]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        canon = []
        seen = set()
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"loop edge at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            e = _canonical(u, v)
            if e in seen:
                raise GraphFormatError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        canon.sort()
        self.n = n
        self.edges: Tuple[Edge, ...] = tuple(canon)
        adj: List[List[int]] = [[] for _ in range(n)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        self.adj: Tuple[Tuple[int, ...], ...] = tuple(tuple(a) for a in adj)

    @classmethod
    def _from_canonical(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        """Trusted fast path for internal callers.

        `edges` must already be canonical (u < v), lexicographically
        sorted, duplicate-free and in range; none of that is re-checked.
        Scanning such a list appends every adjacency list's below-u
        neighbours (increasing) before its above-u neighbours (increasing),
        so the lists come out sorted without a per-list sort.
        """
        g = object.__new__(cls)
        g.n = n
        g.edges = tuple(edges)
        adj: List[List[int]] = [[] for _ in range(n)]
        for u, v in g.edges:
            adj[u].append(v)
            adj[v].append(u)
        g.adj = tuple(tuple(a) for a in adj)
        return g

    def packed_edges(self) -> "np.ndarray":
        """Edges as ascending int64 values u << 32 | v (computed once).

        Canonical edges are lexicographically sorted, so the packed array
        is sorted too.
        """
        try:
            return self._packed
        except AttributeError:
            pass
        if self.edges:
            arr = np.asarray(self.edges, dtype=np.int64)
            packed = (arr[:, 0] << 32) | arr[:, 1]
        else:
            packed = np.empty(0, dtype=np.int64)
        self._packed = packed
        return packed

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adj[u]
        i = bisect_left(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


@dataclass
class EdgeColouring:
    """Total map from the edges of a graph to contiguous colour ids."""

    graph: Graph
    colour_of: Dict[Edge, int]

    @property
    def class_count(self) -> int:
        return 1 + max(self.colour_of.values()) if self.colour_of else 0

    def edge_arrays(self) -> Tuple["np.ndarray", "np.ndarray", "np.ndarray"]:
        """(us, vs, colours) int32 arrays over the coloured edges.

        Computed once and cached; the colouring must not be mutated after
        the first call.  A length check guards against the obvious case.
        """
        from itertools import chain

        m = len(self.colour_of)
        cached = getattr(self, "_arr_cache", None)
        if cached is not None and cached[0] == m:
            return cached[1], cached[2], cached[3]
        flat = np.array(list(chain.from_iterable(self.colour_of)), dtype=np.int32)
        us = flat[0::2].copy()
        vs = flat[1::2].copy()
        cols = np.fromiter(self.colour_of.values(), dtype=np.int32, count=m)
        self._arr_cache = (m, us, vs, cols)
        return us, vs, cols

    def classes(self) -> List[List[Edge]]:
        out: List[List[Edge]] = [[] for _ in range(self.class_count)]
        for e in sorted(self.colour_of):
            out[self.colour_of[e]].append(e)
        return out

    def check_total(self) -> None:
        if len(self.colour_of) >= 50000 and self._totality_holds_bulk():
            pass
        else:
            present = sum(map(self.colour_of.__contains__, self.graph.edges))
            missing = self.graph.num_edges() - present
            if missing:
                raise ValueError(f"colouring not total: {missing} uncoloured edges")
            extra = len(self.colour_of) - self.graph.num_edges()
            if extra:
                raise ValueError(f"colouring has {extra} edges not in the graph")
        used = sorted(set(self.colour_of.values()))
        if used and used != list(range(len(used))):
            raise ValueError("colour ids are not contiguous from 0")

    def _totality_holds_bulk(self) -> bool:
        """True iff the coloured edge set equals the graph's edge set,
        compared as sorted packed integers; False falls back to the scalar
        path, which produces the precise error message."""
        if len(self.colour_of) != self.graph.num_edges():
            return False
        us, vs, _ = self.edge_arrays()
        packed = (us.astype(np.int64) << 32) | vs.astype(np.int64)
        return bool(np.array_equal(np.sort(packed), self.graph.packed_edges()))


@dataclass
class VertexColouring:
    """Partial or total map from vertices to colour ids."""

    colour_of: Dict[int, int]
    palette_size: int

    def is_total_on(self, vertices: Iterable[int]) -> bool:
        return all(v in self.colour_of for v in vertices)


def load_edge_list(stream: TextIO) -> Graph:
    """Parse 'u v' lines into a Graph over ids 0..max-id.

    '#'-prefixed lines and blank lines are skipped.  Loops and duplicate
    edges are rejected with the offending line number.
    """
    edges: List[Edge] = []
    seen = set()
    max_id = -1
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex id in {line!r}")
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id")
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop edge at {u}")
        e = _canonical(u, v)
        if e in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge {e}")
        seen.add(e)
        edges.append(e)
        max_id = max(max_id, u, v)
    return Graph(max_id + 1, edges)


def save_edge_list(graph: Graph, stream: TextIO) -> None:
    for u, v in graph.edges:
        stream.write(f"{u} {v}\n")


def load_colouring(graph: Graph, stream: TextIO) -> EdgeColouring:
    """Parse 'u v c' lines into an EdgeColouring of the given graph."""
    colour_of: Dict[Edge, int] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphFormatError(f"line {lineno}: expected 'u v c', got {line!r}")
        try:
            u, v, c = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer field in {line!r}")
        e = _canonical(u, v)
        if e in colour_of:
            raise GraphFormatError(f"line {lineno}: duplicate edge {e}")
        if c < 0:
            raise GraphFormatError(f"line {lineno}: negative colour id")
        colour_of[e] = c
    col = EdgeColouring(graph, colour_of)
    col.check_total()
    return col


def save_colouring(colouring: EdgeColouring, stream: TextIO) -> None:
    """Write one 'u v c' line per edge, u < v, lexicographically sorted."""
    for u, v in sorted(colouring.colour_of):
        stream.write(f"{u} {v} {colouring.colour_of[(u, v)]}\n")


def complete_graph(t: int) -> Graph:
    if t < 1:
        raise ValueError("t must be positive")
    # Generated in canonical sorted order by construction.
    return Graph._from_canonical(t, [(i, j) for i in range(t) for j in range(i + 1, t)])


def random_regular(n: int, d: int, seed: int = 0, max_retries: int = 100) -> Graph:
    """d-regular simple graph by the pairing model with stub repair.

    Failed stubs (loops or repeated pairs) are re-queued and re-shuffled;
    a whole attempt is abandoned when no suitable pairing of the leftover
    stubs exists.  Deterministic for a given seed.
    """
    if d >= n:
        raise ValueError("need d < n")
    if (n * d) % 2 != 0:
        raise ValueError("n * d must be even")
    if d == 0:
        return Graph(n, [])
    rng = random.Random(seed)

    def suitable(edges, leftover_counts) -> bool:
        if not leftover_counts:
            return True
        nodes = list(leftover_counts)
        for i, s1 in enumerate(nodes):
            for s2 in nodes[i + 1 :]:
                if _canonical(s1, s2) not in edges:
                    return True
        return False

    for _ in range(max_retries):
        edges = set()
        stubs = [v for v in range(n) for _ in range(d)]
        ok = True
        while stubs:
            leftover: Dict[int, int] = {}
            rng.shuffle(stubs)
            it = iter(stubs)
            for s1, s2 in zip(it, it):
                e = _canonical(s1, s2)
                if s1 != s2 and e not in edges:
                    edges.add(e)
                else:
                    leftover[s1] = leftover.get(s1, 0) + 1
                    leftover[s2] = leftover.get(s2, 0) + 1
            if not suitable(edges, leftover):
                ok = False
                break
            stubs = [v for v, c in sorted(leftover.items()) for _ in range(c)]
        if ok:
            return Graph(n, sorted(edges))
    raise GenerationError(
        f"random_regular(n={n}, d={d}) failed after {max_retries} attempts"
    )


def erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    """G(n, p): every pair included independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return Graph(n, edges)
