"""Command-line runner for the worked examples, fuzzing, Monte Carlo and bound sweeps.

Exit status is 0 when every check passes, 1 on any violation or mismatch,
and 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .bounds import BoundId, Hypothesis
from .experiments.examples import EXAMPLE_IDS, run_example
from .experiments.fuzz import MODES, fuzz
from .experiments.montecarlo import RandomModel, montecarlo_random_d
from .experiments.sweep import (InapplicableBound, applicable_bounds, evaluate_bounds,
                                parse_grid, rows_to_csv, rows_to_json, sweep)
from .io import load_subject, parse_complex

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None = None) -> None:
    if out and out != "-":
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _bound_list(text: str | None) -> list[str]:
    if not text:
        return []
    ids = [t.strip() for t in text.split(",") if t.strip()]
    for t in ids:
        BoundId(t)  # raises ValueError on an unknown id
    return ids


def cmd_example(args) -> int:
    params = {k: v for k, v in (("c", args.c), ("k", args.k), ("n", args.n),
                                ("y", args.y), ("d", args.d)) if v is not None}
    rep = run_example(args.id, **params)
    if args.format == "csv":
        text = _csv(["check", "expected", "actual", "passed"],
                    [[c["name"], json.dumps(c["expected"]), json.dumps(c["actual"]), c["passed"]]
                     for c in rep.to_json()["checks"]])
    else:
        text = json.dumps(rep.to_json(), indent=2)
    _emit(text, args.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_fuzz(args) -> int:
    rep = fuzz(args.mode, args.trials, args.seed)
    if args.format == "csv":
        rows = [[v.trial, v.bound_id, json.dumps(v.to_json()["point"]), repr(v.exact), repr(v.bound)]
                for v in rep.violations]
        text = _csv(["trial", "bound_id", "point", "exact", "bound"], rows)
    else:
        text = json.dumps(rep.to_json(), indent=2)
    _emit(text, args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_montecarlo(args) -> int:
    model = RandomModel(parse_complex(args.mean), args.stddev, args.seed)
    res = montecarlo_random_d(model, args.trials, args.dmax)
    if args.format == "csv":
        rows = [[d, c] for d, c in res.histogram().items()] + [["overflow", res.overflow]]
        text = _csv(["d", "count"], rows)
    else:
        text = json.dumps(res.to_json(), indent=2)
    _emit(text, args.out)
    if args.min_success is not None and res.success_fraction < args.min_success:
        return EXIT_FAIL
    return EXIT_OK


def cmd_sweep(args) -> int:
    subject = load_subject(args.input)
    ids = _bound_list(args.bounds)
    rows = sweep(subject, parse_grid(args.grid), ids)
    text = rows_to_csv(rows, ids) if args.format == "csv" else rows_to_json(rows)
    _emit(text, args.out)
    return EXIT_FAIL if any(r.violations() for r in rows) else EXIT_OK


def cmd_bounds_eval(args) -> int:
    import numpy as np

    subject = load_subject(args.input)
    lam = parse_complex(args.lam)
    requested = _bound_list(args.bounds)
    ids = requested or list(applicable_bounds(subject))
    reports, value = {}, None
    for bid in ids:
        try:
            r, value = evaluate_bounds(subject, lam, [bid])
        except InapplicableBound:
            if requested:
                raise
            continue
        reports.update(r)
    if value is None:
        _, value = evaluate_bounds(subject, lam, [])
    exact_f = float(np.linalg.norm(value))
    exact_op = float(np.linalg.norm(value, 2))
    failed = []
    for bid, rep in reports.items():
        exact = exact_f if bid in ("factored", "realization", "e1") else exact_op
        if rep.hypothesis is Hypothesis.VERIFIED and not rep.dominates(exact):
            failed.append(bid)
    if args.format == "csv":
        text = _csv(["bound_id", "value", "log_value", "hypothesis", "exact_f", "exact_op"],
                    [[b, repr(r.value), repr(r.log_value), r.hypothesis.value, repr(exact_f),
                      repr(exact_op)] for b, r in reports.items()])
    else:
        text = json.dumps({"lambda": [lam.real, lam.imag], "exact_f": exact_f,
                           "exact_op": exact_op, "violations": failed,
                           "bounds": {b: r.to_json() for b, r in reports.items()}}, indent=2)
    _emit(text, args.out)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("csv", "json"), default=None,
                     help="output format (default: csv for sweep, json otherwise)")
    fmt.add_argument("--out", default=None, help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="szasz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example", parents=[fmt], help="run a worked example")
    p.add_argument("id", choices=EXAMPLE_IDS)
    p.add_argument("--c", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--y", type=float)
    p.add_argument("--d", type=int)
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("fuzz", parents=[fmt], help="randomized soundness checks")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("montecarlo", parents=[fmt], help="random factor sequences")
    p.add_argument("--mean", required=True, help="RE,IM")
    p.add_argument("--stddev", type=float, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--dmax", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-success", type=float, default=None,
                   help="fail when the success fraction is below this value")
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("sweep", parents=[fmt], help="exact norms and bounds over a grid")
    p.add_argument("--input", required=True)
    p.add_argument("--grid", required=True, help="circle:R:N, segment:A:B:N or re,im;re,im")
    p.add_argument("--bounds", default="", help="comma-separated bound ids")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="bound evaluation")
    bsub = p.add_subparsers(dest="action", required=True)
    e = bsub.add_parser("eval", parents=[fmt], help="evaluate bounds at one point")
    e.add_argument("--input", required=True)
    e.add_argument("--lambda", dest="lam", required=True, help="RE,IM")
    e.add_argument("--bounds", default="", help="comma-separated ids (default: all applicable)")
    e.set_defaults(func=cmd_bounds_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "json"
    try:
        return args.func(args)
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
