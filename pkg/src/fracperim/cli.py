"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .checks import SUITES, run_suite
from .closedform import constant_report
from .errors import ConvergenceError, DomainError
from .spatial_route import ShapeSpec, mc_perimeter
from .sweep import ROUTES, SweepConfig, ball_route, rows_to_csv, rows_to_json, run_sweep

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """argparse with abbreviations disabled, so only the exact long flags work."""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _routes(text: str) -> list[str]:
    routes = [r.strip() for r in text.split(",") if r.strip()]
    bad = [r for r in routes if r not in ROUTES]
    if bad or not routes:
        raise argparse.ArgumentTypeError(f"routes must be drawn from {','.join(ROUTES)}, got {text!r}")
    return routes


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fracperim", description="Fractional s-perimeter toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constant", help="closed-form constants for the unit ball")
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--s", type=float, required=True)
    c.add_argument("--format", choices=("table", "json"), default="table")

    q = sub.add_parser("perimeter", help="s-perimeter of a shape by one or more routes")
    q.add_argument("--shape", choices=("ball", "cube", "ellipsoid", "annulus"), default="ball")
    q.add_argument("--dim", type=int, default=None)
    q.add_argument("--s", type=float, required=True)
    q.add_argument("--route", type=_routes, default=["closed"])
    q.add_argument("--radius", type=float, default=1.0)
    q.add_argument("--side", type=float, default=2.0)
    q.add_argument("--axes", type=_floats, default=None)
    q.add_argument("--r0", type=float, default=None)
    q.add_argument("--r1", type=float, default=None)
    q.add_argument("--tol", type=float, default=1e-8)
    q.add_argument("--samples", type=int, default=1_000_000)
    q.add_argument("--seed", type=int, default=42)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=sorted(SUITES), default="all")
    v.add_argument("--quick", action="store_true")

    w = sub.add_parser("sweep", help="ball perimeter over a grid of dimensions, orders and routes")
    w.add_argument("--dim", type=_ints, required=True)
    w.add_argument("--s", type=_floats, required=True)
    w.add_argument("--route", type=_routes, default=["closed"])
    w.add_argument("--samples", type=int, default=1_000_000)
    w.add_argument("--seed", type=int, default=42)
    w.add_argument("--tol", type=float, default=1e-8)
    w.add_argument("--format", choices=("csv", "json"), default="csv")
    w.add_argument("--out", default=None)
    return p


def _shape(args) -> ShapeSpec:
    if args.shape == "ellipsoid":
        if args.axes is None:
            raise DomainError("--shape ellipsoid needs --axes")
        if args.dim is not None and args.dim != len(args.axes):
            raise DomainError(f"--dim {args.dim} does not match {len(args.axes)} axes")
        return ShapeSpec.ellipsoid(args.axes)
    if args.dim is None:
        raise DomainError(f"--shape {args.shape} needs --dim")
    if args.shape == "ball":
        return ShapeSpec.ball(args.dim, args.radius)
    if args.shape == "cube":
        return ShapeSpec.cube(args.dim, args.side)
    if args.r0 is None or args.r1 is None:
        raise DomainError("--shape annulus needs --r0 and --r1")
    return ShapeSpec.annulus(args.dim, args.r0, args.r1)


def cmd_constant(args, out) -> int:
    rep = constant_report(args.dim, args.s).as_dict()
    if args.format == "json":
        print(json.dumps(rep), file=out)
    else:
        width = max(len(k) for k in rep)
        for k, val in rep.items():
            print(f"{k:<{width}}  {val!r}", file=out)
    return EXIT_OK


def cmd_perimeter(args, out) -> int:
    shape = _shape(args)
    status = EXIT_OK
    for route in args.route:
        if route == "montecarlo":
            t0 = time.perf_counter()
            est = mc_perimeter(shape, args.s, args.samples, args.seed)
            secs = time.perf_counter() - t0
            print(f"montecarlo {est.value!r} +- {est.std_error:.6g} (stderr, samples={est.samples}, "
                  f"seed={est.seed}) {secs:.3f} s", file=out)
            continue
        if shape.kind != "ball":
            raise DomainError(f"route {route!r} is only available for balls; use --route montecarlo")
        res = ball_route(route, shape.dim, args.s, radius=shape.size[0], tol=args.tol)
        print(f"{route:<10} {res.value!r} +- {res.err:.3g} {res.seconds:.3f} s", file=out)
        if not res.converged:
            print(f"{route}: not converged; partial result {res.detail}", file=sys.stderr)
            status = EXIT_CONVERGENCE
    return status


def cmd_verify(args, out) -> int:
    checks = run_suite(args.suite, args.quick)
    passed = all(c.passed for c in checks)
    summary = {"suite": args.suite, "quick": args.quick, "passed": passed,
               "checks": [c.as_dict() for c in checks]}
    print(json.dumps(summary, indent=1), file=out)
    for c in checks:
        if not c.passed:
            print(f"FAIL {c.name}: measured {c.measured:.3e}, expected {c.expected} "
                  f"within {c.tolerance:g}; {c.detail}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_sweep(args, out) -> int:
    cfg = SweepConfig(dims=tuple(args.dim), s_values=tuple(args.s), routes=tuple(args.route),
                      samples=args.samples, seed=args.seed, tol=args.tol, format=args.format)
    rows, converged = run_sweep(cfg)
    text = rows_to_csv(rows) if cfg.format == "csv" else rows_to_json(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    if not converged:
        print("sweep: at least one cell did not converge", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


COMMANDS = {"constant": cmd_constant, "perimeter": cmd_perimeter, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}; partial result {exc.partial}", file=sys.stderr)
        return EXIT_CONVERGENCE


def entry() -> None:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(line_buffering=True)
    sys.exit(main())
