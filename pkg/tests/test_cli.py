import io
import json

import pytest

from c4decomp import cli
from c4decomp.graphs import Graph, load_edge_list, save_edge_list


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def graph_file(tmp_path):
    path = tmp_path / "g.edges"
    g = Graph(8, [(i, j) for i in range(8) for j in range(i + 1, 8)])
    with open(path, "w") as fh:
        save_edge_list(g, fh)
    return str(path)


class TestGen:
    def test_gen_regular(self, tmp_path, capsys):
        out_path = tmp_path / "r.edges"
        code, out, _ = run(
            ["gen", "--kind", "regular", "--n", "20", "--d", "4",
             "--seed", "3", "--out", str(out_path)], capsys)
        assert code == 0
        with open(out_path) as fh:
            g = load_edge_list(fh)
        assert all(g.degree(v) == 4 for v in range(20))
        assert "40 edges" in out

    def test_gen_bad_params(self, tmp_path, capsys):
        code, _, err = run(
            ["gen", "--kind", "regular", "--n", "4", "--d", "5",
             "--out", str(tmp_path / "x")], capsys)
        assert code == 2
        assert "precondition" in err


class TestDecomposeVerifyRoundTrip:
    def test_round_trip(self, graph_file, tmp_path, capsys):
        col_path = str(tmp_path / "g.col")
        stats_path = str(tmp_path / "g.json")
        code, out, _ = run(
            ["decompose", "--input", graph_file, "--out", col_path,
             "--stats", stats_path, "--strategy", "auto", "--seed", "1"], capsys)
        assert code == 0
        assert "classes=" in out
        doc = json.loads(open(stats_path).read())
        assert doc["strategy"] == "auto"

        code, out, _ = run(
            ["verify", "--input", graph_file, "--colouring", col_path], capsys)
        assert code == 0
        assert out.startswith("OK")

    def test_verify_rejects_bad_colouring(self, tmp_path, capsys):
        g_path = str(tmp_path / "c4.edges")
        with open(g_path, "w") as fh:
            fh.write("0 1\n1 2\n2 3\n0 3\n")
        col_path = str(tmp_path / "c4.col")
        with open(col_path, "w") as fh:
            fh.write("0 1 0\n1 2 0\n2 3 0\n0 3 0\n")
        code, out, _ = run(
            ["verify", "--input", g_path, "--colouring", col_path], capsys)
        assert code == 1
        assert "FAIL" in out and "c4_in_class" in out

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(
            ["decompose", "--input", str(tmp_path / "none.edges"),
             "--out", str(tmp_path / "o")], capsys)
        assert code == 2
        assert "not found" in err


class TestComplete:
    def test_complete(self, tmp_path, capsys):
        out_path = str(tmp_path / "k25.col")
        code, out, _ = run(["complete", "--t", "25", "--out", out_path], capsys)
        assert code == 0
        assert "K_25" in out and "budget 10" in out
        assert sum(1 for _ in open(out_path)) == 25 * 24 // 2


class TestFrugal:
    def test_frugal_outputs(self, graph_file, tmp_path, capsys):
        chi_path = str(tmp_path / "chi.txt")
        h_path = str(tmp_path / "h.edges")
        code, out, _ = run(
            ["frugal", "--input", graph_file, "--alpha", "2", "--mode",
             "empirical", "--chi-out", chi_path, "--h-out", h_path], capsys)
        assert code == 0
        assert "palette=" in out and "retention_min=" in out
        with open(h_path) as fh:
            h = load_edge_list(fh)
        assert h.num_edges() >= 1
        assert len(open(chi_path).readlines()) == 8

    def test_strict_precondition_error(self, tmp_path, capsys):
        g_path = str(tmp_path / "p.edges")
        with open(g_path, "w") as fh:
            fh.write("0 1\n")
        code, _, err = run(
            ["frugal", "--input", g_path, "--mode", "strict", "--alpha", "18"],
            capsys)
        assert code == 2
        assert "precondition" in err


class TestOracleAndBound:
    def test_oracle_ex(self, capsys):
        code, out, _ = run(["oracle", "--ex", "8"], capsys)
        assert code == 0 and out.strip() == "11"

    def test_oracle_phi(self, tmp_path, capsys):
        g_path = str(tmp_path / "c4.edges")
        with open(g_path, "w") as fh:
            fh.write("0 1\n1 2\n2 3\n0 3\n")
        code, out, _ = run(["oracle", "--input", g_path], capsys)
        assert code == 0 and out.strip() == "2"

    def test_oracle_needs_an_argument(self, capsys):
        code, _, err = run(["oracle"], capsys)
        assert code == 2 and "precondition" in err

    def test_oracle_over_cap(self, capsys):
        code, _, err = run(["oracle", "--ex", "11"], capsys)
        assert code == 2 and "precondition" in err

    def test_bound(self, capsys):
        code, out, _ = run(["bound", "--delta", "7"], capsys)
        assert code == 0 and out.strip() == "3"

    def test_bound_rejects_zero(self, capsys):
        code, _, err = run(["bound", "--delta", "0"], capsys)
        assert code == 2 and "precondition" in err


class TestBench:
    def test_header_and_rows(self, tmp_path, capsys):
        csv = str(tmp_path / "b.csv")
        code, _, _ = run(
            ["bench", "--n", "60", "--d-list", "4,8", "--seeds", "2",
             "--strategies", "greedy,forest", "--csv", csv], capsys)
        assert code == 0
        lines = open(csv).read().splitlines()
        assert lines[0] == cli.BENCH_HEADER
        assert len(lines) == 1 + 2 * 2 * 2
        # Deterministic row order: d, then seed, then the strategies in the
        # order they were given on the command line.
        keys = [tuple(line.split(",")[i] for i in (1, 5, 3)) for line in lines[1:]]
        strategy_rank = {"greedy": 0, "forest": 1}
        assert keys == sorted(
            keys, key=lambda k: (int(k[0]), int(k[1]), strategy_rank[k[2]])
        )
        for line in lines[1:]:
            fields = line.split(",")
            assert len(fields) == 10
            assert fields[8] == "true"

    def test_empty_d_list_emits_header_only(self, capsys):
        code, out, _ = run(["bench", "--n", "10", "--d-list", ""], capsys)
        assert code == 0
        assert out.strip() == cli.BENCH_HEADER

    def test_unknown_strategy(self, capsys):
        code, _, err = run(
            ["bench", "--n", "10", "--d-list", "2", "--strategies", "magic"],
            capsys)
        assert code == 2 and "unknown strategy" in err

    def test_deterministic_modulo_millis(self, tmp_path, capsys):
        argv = ["bench", "--n", "40", "--d-list", "4", "--seeds", "2",
                "--strategies", "pipeline"]
        code1, out1, _ = run(argv, capsys)
        code2, out2, _ = run(argv, capsys)
        assert code1 == code2 == 0

        def strip_millis(text):
            return [line.rsplit(",", 1)[0] for line in text.splitlines()]

        assert strip_millis(out1) == strip_millis(out2)


class TestUsage:
    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 2
