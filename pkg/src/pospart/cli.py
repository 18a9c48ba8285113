"""Command-line interface.

Four subcommands: ``moment`` for a single positive-part moment, ``pin`` and
``curve`` for the tail bound, ``validate`` for the oracle cross-check suites.
Data rows go to stdout as CSV (or JSON objects with --format json), all
diagnostics to stderr.  Exit codes: 0 success, 2 usage or precondition
error, 3 numerical failure.

Numbers are printed with 17 significant digits, '.' decimal separator, no
locale dependence, so identical flags give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import PositivePartError, PreconditionError, QuadratureError, SpecParseError
from .moments import MomentRequest
from .specparse import parse_spec
from .tailbound import TailBoundProblem, pin, pin_curve
from .validate import run_suite

__all__ = ["main", "console_main"]

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_NUMERICAL = 3


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _thread_cap() -> int:
    """PPM_THREADS caps worker parallelism (0 = auto).  The current
    implementation computes sequentially, so the value is validated and
    recorded but has no effect yet."""
    raw = os.environ.get("PPM_THREADS", "0")
    try:
        cap = int(raw)
        if cap < 0:
            raise ValueError
    except ValueError:
        print(f"warning: ignoring invalid PPM_THREADS={raw!r}", file=sys.stderr)
        return 0
    return cap


def _emit(rows: list[dict], header: list[str], fmt: str, out_path, header_row: bool = True):
    lines = []
    if fmt == "csv":
        if header_row:
            lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_fmt(row[k]) if isinstance(row[k], float) else str(row[k])
                                  for k in header))
    else:
        for row in rows:
            lines.append(json.dumps({k: row[k] for k in header}))
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_moment(args) -> int:
    try:
        spec = parse_spec(args.dist)
        other = parse_spec(args.other) if args.other else None
        request = MomentRequest(
            spec=spec, p=args.p, method=args.method,
            s=args.s, j=args.j, other=other, rel_tol=args.rel_tol,
        )
        result = request.compute()
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except (QuadratureError, PositivePartError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL
    quad = result.quadrature
    row = {
        "value": result.value,
        "err_est": result.prefactor * quad.err_est,
        "tail_bound": result.prefactor * quad.tail_bound + result.extra_error,
        "evaluations": quad.evaluations,
    }
    _emit([row], ["value", "err_est", "tail_bound", "evaluations"], args.format,
          args.out, header_row=False)
    return _EXIT_OK


def _tail_rows(results) -> list[dict]:
    return [
        {
            "x": r.x, "t_x": r.t_x, "pin": r.pin,
            "mu2": r.mu2, "mu3": r.mu3, "residual": r.residual,
        }
        for r in results
    ]


def _cmd_pin(args) -> int:
    try:
        problem = TailBoundProblem(args.sigma, args.y, args.eps)
        row = pin(problem, args.x, rel_tol=args.rel_tol, tol_x=args.tol_x)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except PositivePartError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL
    _emit(_tail_rows([row]), ["x", "t_x", "pin", "mu2", "mu3", "residual"],
          args.format, args.out)
    return _EXIT_OK


def _cmd_curve(args) -> int:
    try:
        problem = TailBoundProblem(args.sigma, args.y, args.eps)
        rows = pin_curve(problem, args.x_min, args.x_max, args.steps,
                         rel_tol=args.rel_tol, tol_x=args.tol_x,
                         warm_start=not args.no_warm_start)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    failures = [r for r in rows if r.is_failure()]
    for r in failures:
        print(f"note: x={r.x:g} failed: {r.error}", file=sys.stderr)
    _emit(_tail_rows(rows), ["x", "t_x", "pin", "mu2", "mu3", "residual"],
          args.format, args.out)
    return _EXIT_OK if len(failures) < len(rows) else _EXIT_NUMERICAL


def _cmd_validate(args) -> int:
    checks = run_suite(args.suite, args.seed)
    width = max(len(c.check_id) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{c.check_id.ljust(width)}  {status}  {c.label} ({c.detail})")
    return _EXIT_OK if all(c.passed for c in checks) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pospart",
        description="Positive-part moments from transforms, and the optimal "
                    "tail bound for sums of bounded random variables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mom = sub.add_parser("moment", help="one positive-part moment as a CSV row")
    mom.add_argument("--dist", required=True, help="distribution spec string")
    mom.add_argument("--p", type=float, required=True, help="moment order")
    mom.add_argument("--method", choices=("laplace", "cf", "diff", "negative"),
                     default="cf")
    mom.add_argument("--s", type=float, default=None,
                     help="line offset for laplace/negative (default 1.0 / -1.0)")
    mom.add_argument("--j", type=int, default=-1, help="remainder order")
    mom.add_argument("--other", default=None,
                     help="companion spec for --method diff (default: moment-matched atoms)")
    mom.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-9)
    mom.add_argument("--format", choices=("csv", "json"), default="csv")
    mom.add_argument("--out", default=None, help="write output to a file")
    mom.set_defaults(func=_cmd_moment)

    for name, help_text in (("pin", "tail bound at one level"),
                            ("curve", "tail bound on a uniform grid")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--sigma", type=float, required=True)
        cmd.add_argument("--y", type=float, required=True)
        cmd.add_argument("--eps", type=float, required=True)
        if name == "pin":
            cmd.add_argument("--x", type=float, required=True)
        else:
            cmd.add_argument("--x-min", dest="x_min", type=float, required=True)
            cmd.add_argument("--x-max", dest="x_max", type=float, required=True)
            cmd.add_argument("--steps", type=int, required=True)
            cmd.add_argument("--no-warm-start", action="store_true")
        cmd.add_argument("--tol-x", dest="tol_x", type=float, default=1e-9)
        cmd.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-9)
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")
        cmd.add_argument("--out", default=None)
        cmd.set_defaults(func=_cmd_pin if name == "pin" else _cmd_curve)

    val = sub.add_parser("validate", help="run the oracle cross-check suite")
    val.add_argument("--suite", choices=("quick", "full"), default="quick")
    val.add_argument("--seed", type=int, default=0)
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    _thread_cap()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return _EXIT_USAGE if exc.code not in (0, None) else 0
    return args.func(args)


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
