"""Command-line front end: optimize, check a point, run bench suites.

Subcommands
    run    optimize a problem and write a JSONL trace
    check  verify third-order conditions at a point, print a JSON report
    bench  run a named suite and write a CSV summary

Exit codes: 0 success (run: terminal convergence; check: conditions
hold; bench: all rows pass), 1 usage or runtime error, 2 iteration
budget exhausted, 3 negative verdict (check) or failing rows (bench).

Traces are one JSON object per line with a fixed field order, so equal
seeds produce byte-identical files and parsing then re-serializing is
the identity.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bench
from .conditions import ConditionTolerances, check_third_order
from .escape import IterationRecord, OptimizerConfig, Trace, minimize
from .polynomials import CORPUS_NAMES, Polynomial, corpus, smoothness_bounds

_FLAG_KEYS = ("cubic_decrease", "step_vs_mu", "trigger", "third_decrease")


def record_to_obj(rec: IterationRecord) -> dict:
    return {
        "iter": rec.iteration,
        "phase": rec.phase,
        "f": rec.value,
        "grad_norm": rec.grad_norm,
        "mu": rec.stationarity,
        "c_q": rec.proj_norm,
        "subspace_dim": rec.subspace_dim,
        "step_norm": rec.step_norm,
        "flags": {k: rec.flags.get(k) for k in _FLAG_KEYS},
    }


def record_from_obj(obj: dict) -> IterationRecord:
    return IterationRecord(
        iteration=obj["iter"],
        phase=obj["phase"],
        value=obj["f"],
        grad_norm=obj["grad_norm"],
        stationarity=obj["mu"],
        proj_norm=obj["c_q"],
        subspace_dim=obj["subspace_dim"],
        step_norm=obj["step_norm"],
        flags=dict(obj["flags"]),
    )


def dump_records(records) -> str:
    return "".join(
        json.dumps(record_to_obj(r), separators=(",", ":")) + "\n" for r in records
    )


def write_trace(trace: Trace, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(dump_records(trace.records))


def read_records(path: str) -> list:
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(record_from_obj(json.loads(line)))
    return records


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise ValueError(f"could not parse vector {text!r}: {exc}") from None


def _load_problem(name_or_path: str) -> Polynomial:
    if name_or_path in CORPUS_NAMES:
        return corpus(name_or_path)
    try:
        with open(name_or_path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValueError(
            f"{name_or_path!r} is neither a corpus name nor a readable file: {exc}"
        ) from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON in {name_or_path!r}: {exc}") from None
    return Polynomial.from_dict(data)


def _cmd_run(args) -> int:
    poly = _load_problem(args.problem)
    x0 = _parse_vector(args.x0)
    if x0.shape != (poly.dim,):
        raise ValueError(f"x0 has {x0.size} entries but the problem has dimension {poly.dim}")
    if args.R is None or args.L is None:
        radius = max(1.0, 2.0 * float(np.linalg.norm(x0)))
        bounds = smoothness_bounds(poly, radius)
        reg = args.R if args.R is not None else bounds.hess_lipschitz
        lip3 = args.L if args.L is not None else bounds.third_lipschitz
    else:
        reg, lip3 = args.R, args.L
    config = OptimizerConfig(
        hess_lipschitz=reg,
        third_lipschitz=lip3,
        sampler_constant=args.B,
        max_iters=args.max_iters,
        seed=args.seed,
        tol_mu=args.tol_mu,
    )
    trace = minimize(poly, x0, config)
    write_trace(trace, args.trace)
    final = ",".join(repr(float(v)) for v in trace.final_point)
    print(f"reason={trace.reason} iterations={trace.iterations} "
          f"final_f={float(trace.final_value)!r} final_x={final}")
    return 0 if trace.reason == "terminal" else 2


def _cmd_check(args) -> int:
    poly = _load_problem(args.problem)
    point = _parse_vector(args.point)
    if point.shape != (poly.dim,):
        raise ValueError(f"point has {point.size} entries but the problem has dimension {poly.dim}")
    tols = ConditionTolerances(eig=args.tol_eig, third=args.tol_third)
    report = check_third_order(poly, point, tols)
    print(json.dumps(report.to_dict(), separators=(",", ":")))
    return 0 if report.holds else 3


def _cmd_bench(args) -> int:
    if args.suite not in bench.ALL_SUITES:
        print(f"error: unknown suite {args.suite!r}; known: {', '.join(bench.ALL_SUITES)}",
              file=sys.stderr)
        return 1
    rows = bench.run_suite(args.suite, seed=args.seed)
    bench.write_csv(rows, args.out)
    failed = [r for r in rows if not r.passed]
    print(f"suite={args.suite} cases={len(rows)} failed={len(failed)}")
    return 0 if not failed else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thirdopt",
        description="find and certify third-order local minima of polynomial objectives",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="optimize a problem and write a JSONL trace")
    run.add_argument("--problem", required=True,
                     help=f"corpus name ({', '.join(CORPUS_NAMES)}) or polynomial JSON path")
    run.add_argument("--x0", required=True, help="starting point, comma separated")
    run.add_argument("--R", type=float, default=None,
                     help="Hessian Lipschitz bound (default: term-wise bound)")
    run.add_argument("--L", type=float, default=None,
                     help="third-derivative Lipschitz bound (default: term-wise bound)")
    run.add_argument("--B", type=float, default=8.0, help="direction sampler constant")
    run.add_argument("--max-iters", type=int, default=100)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--tol-mu", type=float, default=1e-6)
    run.add_argument("--trace", required=True, help="output JSONL trace path")
    run.set_defaults(func=_cmd_run)

    check = sub.add_parser("check", help="verify third-order conditions at a point")
    check.add_argument("--problem", required=True)
    check.add_argument("--point", required=True, help="point to check, comma separated")
    check.add_argument("--tol-eig", type=float, default=1e-8)
    check.add_argument("--tol-third", type=float, default=1e-8)
    check.set_defaults(func=_cmd_check)

    bench_p = sub.add_parser("bench", help="run a benchmark suite and write CSV")
    bench_p.add_argument("--suite", required=True,
                         help=f"one of: {', '.join(bench.ALL_SUITES)}")
    bench_p.add_argument("--out", required=True, help="output CSV path")
    bench_p.add_argument("--seed", type=int, default=0)
    bench_p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
