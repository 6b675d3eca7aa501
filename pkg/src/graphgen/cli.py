"""Command-line front end: ``gen``, ``solve`` and ``bench``.

Exit codes: 0 success, 2 usage or file error, 3 iteration cap reached,
4 CG and GG optima disagree.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import driver
from .instance import InstanceFormatError, generate, load, save

EXIT_USAGE, EXIT_CAP, EXIT_MISMATCH = 2, 3, 4


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _add_instance_flags(p):
    p.add_argument("--customers", type=_positive, default=30)
    p.add_argument("--vehicles", type=_positive, default=5)
    p.add_argument("--capacity", type=_positive, default=7)
    p.add_argument("--grid", type=_nonneg, default=100)


def _add_solver_flags(p):
    p.add_argument("--tol", type=float, default=1e-6, help="reduced-cost tolerance")
    p.add_argument("--max-iter", type=_positive, default=100_000)
    p.add_argument("--lp", choices=("simplex", "highs"), default="simplex")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphgen",
                                     description="Column generation vs graph generation on CVRP")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance file")
    gen.add_argument("--seed", type=_nonneg, default=0)
    _add_instance_flags(gen)
    gen.add_argument("-o", "--output", type=Path, default=None,
                     help="instance file (default: inst<seed>.json)")

    solve = sub.add_parser("solve", help="solve one instance with CG or GG")
    solve.add_argument("instance", type=Path)
    solve.add_argument("--algo", choices=("cg", "gg"), required=True)
    solve.add_argument("--seed", type=_nonneg, default=0, help="ordering RNG seed (GG)")
    _add_solver_flags(solve)
    solve.add_argument("--out-dir", type=Path, default=Path("."))

    bench = sub.add_parser("bench", help="run both algorithms on a batch of random instances")
    group = bench.add_mutually_exclusive_group(required=True)
    group.add_argument("--seeds", type=_nonneg, nargs="+")
    group.add_argument("--count", type=_positive)
    bench.add_argument("--base-seed", type=_nonneg, default=0)
    _add_instance_flags(bench)
    _add_solver_flags(bench)
    bench.add_argument("--gg-seed", type=_nonneg, default=0, help="ordering RNG seed for GG")
    bench.add_argument("--workers", type=_positive, default=1)
    bench.add_argument("--out-dir", type=Path, default=Path("bench_out"))
    return parser


def cmd_gen(args) -> int:
    inst = generate(args.seed, args.customers, args.vehicles, args.capacity, args.grid)
    path = args.output or Path(f"inst{args.seed}.json")
    try:
        save(inst, path)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(path)
    return 0


def _params(args, mode, seed):
    return driver.SolveParams(mode=mode, tolerance=args.tol, max_iterations=args.max_iter,
                              seed=seed, lp_method=args.lp)


def cmd_solve(args) -> int:
    try:
        inst = load(args.instance)
    except (OSError, InstanceFormatError, ValueError) as exc:
        print(f"error: cannot read instance {args.instance}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    mode = args.algo.upper()
    result = driver.solve(inst, _params(args, mode, args.seed))
    try:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        trace = driver.write_trace(result, args.out_dir / f"{args.instance.stem}_{args.algo}.csv")
    except OSError as exc:
        print(f"error: cannot write trace: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"algo={mode} status={result.status} objective={result.objective:.6f} "
          f"iterations={result.iterations} seconds={result.seconds:.3f} trace={trace}")
    return 0 if result.converged else EXIT_CAP


def cmd_bench(args) -> int:
    seeds = args.seeds if args.seeds else [args.base_seed + i for i in range(args.count)]
    inst_dir = args.out_dir / "instances"
    try:
        inst_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {inst_dir}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    instances = []
    for s in seeds:
        inst = generate(s, args.customers, args.vehicles, args.capacity, args.grid)
        save(inst, inst_dir / f"seed{s}.json")
        instances.append((f"seed{s}", inst))
    try:
        report = driver.run_benchmark(instances, _params(args, driver.CG, 0),
                                      _params(args, driver.GG, args.gg_seed),
                                      out_dir=args.out_dir, workers=args.workers)
    except driver.ObjectiveMismatch as exc:
        print(exc.report.table() if exc.report else "", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    print(report.table())
    print(f"summary={args.out_dir / 'summary.csv'}")
    capped = [r.instance for r in report.rows
              if r.cg_status != driver.CONVERGED or r.gg_status != driver.CONVERGED]
    if capped:
        print(f"iteration cap reached on: {', '.join(capped)}", file=sys.stderr)
        return EXIT_CAP
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    return {"gen": cmd_gen, "solve": cmd_solve, "bench": cmd_bench}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
