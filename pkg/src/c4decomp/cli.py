"""Command-line surface and the benchmark harness.

Exit codes: 0 success, 1 invalid colouring / verification failure,
2 usage or input errors.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from . import graphs, kernels, pipeline, sidon, verify
from .frugal import FrugalParams, frugal_colour
from .graphs import Graph

BENCH_HEADER = "n,d,Delta,strategy,alpha,seed,colours,sqrt_ratio,verify_ok,millis"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _load_graph(path: str) -> Graph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return graphs.load_edge_list(fh)
    except FileNotFoundError:
        raise CliError(f"error: file: {path} not found")
    except graphs.GraphFormatError as exc:
        raise CliError(f"error: parse: {path}: {exc}")


def _frugal_params(args, default_mode: str = "empirical") -> FrugalParams:
    mode = getattr(args, "mode", None) or default_mode
    try:
        return FrugalParams(
            alpha=args.alpha,
            seed=args.seed,
            mode=mode,
            empirical_retention=getattr(args, "retention", 0.05),
        )
    except ValueError as exc:
        raise CliError(f"error: precondition: {exc}")


def cmd_gen(args) -> int:
    try:
        if args.kind == "regular":
            g = graphs.random_regular(args.n, args.d, seed=args.seed)
        elif args.kind == "er":
            g = graphs.erdos_renyi(args.n, args.p, seed=args.seed)
        else:
            g = graphs.complete_graph(args.t)
    except (ValueError, graphs.GenerationError) as exc:
        raise CliError(f"error: precondition: {exc}")
    with open(args.out, "w", encoding="utf-8") as fh:
        graphs.save_edge_list(g, fh)
    print(f"wrote {g.n} vertices, {g.num_edges()} edges to {args.out}")
    return EXIT_OK


def cmd_complete(args) -> int:
    try:
        colouring = sidon.complete_c4_free_colouring(args.t)
    except ValueError as exc:
        raise CliError(f"error: precondition: {exc}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            graphs.save_colouring(colouring, fh)
    print(f"K_{args.t}: {colouring.class_count} classes "
          f"(budget {math.ceil(2 * math.sqrt(args.t))})")
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = _load_graph(args.input)
    config = pipeline.PipelineConfig(
        frugal=_frugal_params(args), strategy=args.strategy
    )
    colouring, stats = pipeline.decompose(g, config)
    with open(args.out, "w", encoding="utf-8") as fh:
        graphs.save_colouring(colouring, fh)
    if args.stats:
        with open(args.stats, "w", encoding="utf-8") as fh:
            fh.write(stats.to_json() + "\n")
    print(f"classes={colouring.class_count} sqrt_ratio={stats.sqrt_ratio:.3f}")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args.input)
    try:
        with open(args.colouring, "r", encoding="utf-8") as fh:
            colouring = graphs.load_colouring(g, fh)
    except FileNotFoundError:
        raise CliError(f"error: file: {args.colouring} not found")
    except (graphs.GraphFormatError, ValueError) as exc:
        raise CliError(f"error: parse: {args.colouring}: {exc}")
    report = verify.verify_c4_free_colouring(g, colouring)
    if report.ok:
        print(f"OK classes={colouring.class_count}")
        return EXIT_OK
    print(report.summary())
    return EXIT_INVALID


def cmd_frugal(args) -> int:
    g = _load_graph(args.input)
    params = _frugal_params(args, default_mode="strict" if args.mode is None else args.mode)
    try:
        result = frugal_colour(g, params)
    except ValueError as exc:
        raise CliError(f"error: precondition: {exc}")
    if args.chi_out:
        with open(args.chi_out, "w", encoding="utf-8") as fh:
            for v in sorted(result.chi.colour_of):
                fh.write(f"{v} {result.chi.colour_of[v]}\n")
    if args.h_out:
        with open(args.h_out, "w", encoding="utf-8") as fh:
            graphs.save_edge_list(result.h, fh)
    flag = " degraded" if result.degraded else ""
    print(
        f"palette={result.chi.palette_size} retention_min={result.retention_min:.4f} "
        f"retention_mean={result.retention_mean:.4f} "
        f"resamples={result.resamples_used}{flag}"
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        if args.ex is not None:
            print(verify.exact_ex_c4(args.ex))
        elif args.input:
            g = _load_graph(args.input)
            print(verify.exact_phi_c4(g, max_colours=args.max_colours,
                                      edge_cap=args.edge_cap))
        else:
            raise CliError("error: precondition: give --ex N or --input FILE")
    except verify.OracleCapExceeded as exc:
        raise CliError(f"error: precondition: {exc}")
    return EXIT_OK


def cmd_bound(args) -> int:
    try:
        print(verify.phi_lower_bound(args.delta))
    except ValueError as exc:
        raise CliError(f"error: precondition: {exc}")
    return EXIT_OK


def _bench_cell(cell):
    n, d, strategy, alpha, mode, seed = cell
    g = graphs.random_regular(n, d, seed=seed)
    params = FrugalParams(alpha=alpha, seed=seed, mode=mode)
    config = pipeline.PipelineConfig(frugal=params, strategy=strategy)
    start = time.perf_counter()
    colouring, stats = pipeline.decompose(g, config)
    millis = int((time.perf_counter() - start) * 1000)
    report = verify.verify_c4_free_colouring(g, colouring)
    row = (
        f"{n},{d},{g.max_degree()},{strategy},{alpha:g},{seed},"
        f"{colouring.class_count},{stats.sqrt_ratio:.6f},"
        f"{'true' if report.ok else 'false'},{millis}"
    )
    return cell, report.ok, row


def cmd_bench(args) -> int:
    d_list = [int(x) for x in args.d_list.split(",") if x.strip()] if args.d_list else []
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    for s in strategies:
        if s not in pipeline.STRATEGIES:
            raise CliError(f"error: precondition: unknown strategy {s!r}")
    seeds = list(range(args.seeds))
    cells = [
        (args.n, d, strategy, args.alpha, args.mode, seed)
        for d in d_list
        for seed in seeds
        for strategy in strategies
    ]
    results = {}
    if args.jobs > 1 and cells:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for cell, ok, row in pool.map(_bench_cell, cells):
                results[cell] = (ok, row)
    else:
        for cell in cells:
            cell, ok, row = _bench_cell(cell)
            results[cell] = (ok, row)
    lines = [BENCH_HEADER]
    failed = False
    for cell in cells:  # deterministic (d, seed, strategy) order
        ok, row = results[cell]
        failed = failed or not ok
        lines.append(row)
    text = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if failed:
        print("error: verification failed for at least one bench row", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="c4decomp",
        description="C4-free edge decompositions of bounded-degree graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mode_default: Optional[str] = "empirical"):
        p.add_argument("--alpha", type=float, default=2.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--mode", choices=["strict", "empirical"], default=mode_default)
        p.add_argument("--retention", type=float, default=0.05,
                       help="empirical-mode acceptance threshold")

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("--kind", choices=["regular", "er", "complete"], required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("complete", help="C4-free colouring of K_t")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("decompose", help="decompose a graph into C4-free classes")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--strategy", choices=list(pipeline.STRATEGIES), default="auto")
    p.add_argument("--stats")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="verify a colouring file")
    p.add_argument("--input", required=True)
    p.add_argument("--colouring", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("frugal", help="run the frugal colouring engine")
    p.add_argument("--input", required=True)
    p.add_argument("--chi-out")
    p.add_argument("--h-out")
    common(p, mode_default=None)
    p.set_defaults(func=cmd_frugal)

    p = sub.add_parser("oracle", help="exact small-instance oracles")
    p.add_argument("--ex", type=int, help="print ex(n, C4) for this n")
    p.add_argument("--input", help="print exact phi_C4 of this graph")
    p.add_argument("--max-colours", type=int, default=8)
    p.add_argument("--edge-cap", type=int, default=verify.DEFAULT_PHI_EDGE_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bound", help="quotient lower bound on phi_C4(K_{delta+1})")
    p.add_argument("--delta", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("bench", help="benchmark harness with CSV output")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--d-list", default="")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--strategies", default="auto")
    p.add_argument("--csv")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--mode", choices=["strict", "empirical"], default="empirical")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(exc, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
