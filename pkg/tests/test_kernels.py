import hashlib
import os
import subprocess
import sys

import pytest

from c4decomp import kernels
from c4decomp.graphs import complete_graph, random_regular
from tests.conftest import c4_graph, cycle_graph, petersen_graph, random_tree


def _witness_ok(adj, cyc):
    w, x, y, z = cyc
    return (
        len({w, x, y, z}) == 4
        and x in adj[w]
        and y in adj[x]
        and z in adj[y]
        and w in adj[z]
    )


class TestBackendSelection:
    def test_backend_is_reported(self):
        assert kernels.BACKEND in ("compiled", "pure")

    def test_pure_env_forces_fallback(self):
        code = (
            "from c4decomp import kernels; print(kernels.BACKEND)"
        )
        env = dict(os.environ, C4DECOMP_PURE="1")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.stdout.strip() == "pure"


class TestFindC4:
    @pytest.mark.parametrize("builder,expect_cycle", [
        (c4_graph, True),
        (lambda: complete_graph(6), True),
        (petersen_graph, False),
        (lambda: cycle_graph(7), False),
        (lambda: random_tree(50, seed=3), False),
        (lambda: random_regular(60, 6, seed=1), None),  # whatever it is
    ])
    def test_adj_and_edge_entrypoints_agree(self, builder, expect_cycle):
        g = builder()
        adj = [set(a) for a in g.adj]
        hit_adj = kernels.find_c4_adj(g.adj)
        hit_edges = kernels.find_c4_edges(g.n, list(g.edges))
        assert (hit_adj is None) == (hit_edges is None)
        if expect_cycle is not None:
            assert (hit_adj is not None) == expect_cycle
        if hit_adj is not None:
            assert _witness_ok(adj, hit_adj)
            assert _witness_ok(adj, hit_edges)

    def test_empty_graph(self):
        assert kernels.find_c4_adj([]) is None
        assert kernels.find_c4_edges(0, []) is None


class TestGreedyColouring:
    def test_valid_c4_free_first_fit(self):
        g = random_regular(100, 8, seed=5)
        colours = kernels.greedy_c4_colouring(g.n, list(g.edges))
        assert len(colours) == g.num_edges()
        assert min(colours) == 0
        by_class = {}
        for e, c in zip(g.edges, colours):
            by_class.setdefault(c, []).append(e)
        for c, cls in by_class.items():
            assert kernels.find_c4_edges(g.n, cls) is None

    def test_first_fit_property(self):
        # On C4 the second "closing" edge must open class 1, the others 0.
        edges = [(0, 1), (1, 2), (2, 3), (0, 3)]
        assert kernels.greedy_c4_colouring(4, edges) == [0, 0, 0, 1]

    def test_bit_identical_across_backends(self):
        if kernels.BACKEND != "compiled":
            pytest.skip("only meaningful when the compiled backend is active")
        g = random_regular(200, 16, seed=11)
        colours = kernels.greedy_c4_colouring(g.n, list(g.edges))
        digest = hashlib.sha256(bytes(colours)).hexdigest()
        code = (
            "import hashlib\n"
            "from c4decomp import kernels\n"
            "from c4decomp.graphs import random_regular\n"
            "assert kernels.BACKEND == 'pure'\n"
            "g = random_regular(200, 16, seed=11)\n"
            "colours = kernels.greedy_c4_colouring(g.n, list(g.edges))\n"
            "print(hashlib.sha256(bytes(colours)).hexdigest())\n"
        )
        env = dict(os.environ, C4DECOMP_PURE="1")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.returncode == 0, out.stderr
        assert out.stdout.strip() == digest
