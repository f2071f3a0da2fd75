"""Shared graph builders for the test suite."""

from __future__ import annotations

import random
from functools import lru_cache
from typing import List, Tuple

import pytest

from c4decomp.graphs import Graph, complete_graph, erdos_renyi, random_regular

Edge = Tuple[int, int]


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def random_tree(n: int, seed: int = 0) -> Graph:
    rng = random.Random(seed)
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def c4_graph() -> Graph:
    return cycle_graph(4)


def small_corpus() -> List[Tuple[str, Graph]]:
    """Small named instances: trees, cycles, cliques, bicliques, Petersen."""
    return [
        ("path_10", path_graph(10)),
        ("star_9", star_graph(9)),
        ("tree_40", random_tree(40, seed=7)),
        ("cycle_4", cycle_graph(4)),
        ("cycle_5", cycle_graph(5)),
        ("cycle_9", cycle_graph(9)),
        ("K_5", complete_graph(5)),
        ("K_8", complete_graph(8)),
        ("K_12", complete_graph(12)),
        ("K_3_4", complete_bipartite(3, 4)),
        ("K_5_5", complete_bipartite(5, 5)),
        ("petersen", petersen_graph()),
    ]


# One pinned graph per (n, d) cell; d >= n cells are not constructible.
REGULAR_CELLS = [
    (100, 4),
    (100, 16),
    (100, 64),
    (5000, 4),
    (5000, 16),
    (5000, 64),
    (5000, 256),
]

GRAPH_SEED = 101


@lru_cache(maxsize=None)
def regular_cell(n: int, d: int) -> Graph:
    return random_regular(n, d, seed=GRAPH_SEED)


@lru_cache(maxsize=None)
def er_graph() -> Graph:
    return erdos_renyi(1000, 0.05, seed=GRAPH_SEED)


@pytest.fixture(scope="session")
def small_graphs():
    return small_corpus()
