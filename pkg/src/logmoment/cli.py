"""Command-line front end.

Machine output (JSON or CSV) goes to stdout, diagnostics to stderr.  Exit
codes: 0 success, 2 infeasible target, 3 solver did not converge, 4 bad
input.  A failing `verify` run exits 1.

Functions are passed as the JSON descriptors used everywhere else:
``{"order": n, "sign": "+", "slopes": [...], "knots": [...]}`` for family
members and ``{"pieces": [[slope, knot], ...], "cutoff": ...}`` for general
piecewise potentials, with the string ``"inf"`` for infinite entries.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .core import any_fn_from_json, fn_to_json
from .envelope import body_contains, envelope, envelope_grid, grid_csv_lines
from .errors import Infeasible, LogMomentError, NonConvergence
from .extreal import INF, to_json_value
from .inverse import SolveStatus, SolverConfig, match_moments
from .khintchine import ASYMPTOTIC, constants_asymptotic, constants_fixed_n
from .moments import ExponentTuple, MomentVector, moment
from .verify import _DEFAULT_SEED, GridSpec, default_suite

__all__ = ["run", "main"]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INFEASIBLE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_BAD_INPUT = 4

SEED_ENV = "LOGMOMENT_SEED"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route that to exit code 4
    def error(self, message):
        raise _UsageError(message)


def _ext_real(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "+inf"):
        return INF
    try:
        return float(text)
    except ValueError:
        raise _UsageError(f"expected a number or 'inf', got {text!r}") from None


def _n_value(text: str):
    if text.strip().lower() == ASYMPTOTIC:
        return ASYMPTOTIC
    try:
        return int(text)
    except ValueError:
        raise _UsageError(f"expected an integer or 'asymptotic', got {text!r}") from None


def _load_function(args):
    if args.function is not None and args.function_file is not None:
        raise _UsageError("give --function or --function-file, not both")
    if args.function is not None:
        text = args.function
    elif args.function_file is not None:
        if args.function_file == "-":
            text = sys.stdin.read()
        else:
            with open(args.function_file, "r", encoding="utf-8") as fh:
                text = fh.read()
    else:
        raise _UsageError("a function is required (--function or --function-file)")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _UsageError(f"function is not valid JSON: {exc}") from None
    return any_fn_from_json(data)


def _solver_config(args) -> SolverConfig | None:
    if getattr(args, "tolerance", None) is None:
        return None
    return SolverConfig(rel_tol=args.tolerance)


def _emit(text: str, path: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def _report_json(report) -> dict:
    return {
        "status": report.status.value,
        "residual": _finite_or_none(report.residual),
        "iterations": report.iterations,
        "message": report.message,
        "solution": None if report.solution is None else fn_to_json(report.solution),
    }


# ---------------------------------------------------------------------------
# subcommands

def _cmd_moments(args) -> int:
    fn = _load_function(args)
    values = [moment(fn, p) for p in args.exponents]
    _emit(json.dumps({"exponents": list(args.exponents), "moments": values}),
          args.output)
    return EXIT_OK


def _cmd_invert(args) -> int:
    if len(args.exponents) != len(args.targets):
        raise _UsageError("need as many targets as exponents")
    report = match_moments(
        ExponentTuple(tuple(args.exponents)),
        MomentVector(tuple(args.targets)),
        args.sign,
        _solver_config(args),
    )
    _emit(json.dumps(_report_json(report)), args.output)
    if report.status is SolveStatus.INFEASIBLE:
        return EXIT_INFEASIBLE
    if report.status is SolveStatus.NO_CONVERGENCE:
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _cmd_envelope(args) -> int:
    if len(args.exponents) != len(args.targets) + 1:
        raise _UsageError("need one more exponent than targets")
    res = envelope(
        ExponentTuple(tuple(args.exponents)),
        MomentVector(tuple(args.targets)),
        _solver_config(args),
    )
    out = {
        "lo": res.lo,
        "hi": res.hi,
        "argmin": fn_to_json(res.argmin),
        "argmax": fn_to_json(res.argmax),
        "max_sign": res.parity.max_sign.value,
    }
    _emit(json.dumps(out), args.output)
    return EXIT_OK


def _cmd_body(args) -> int:
    if len(args.exponents) != len(args.targets):
        raise _UsageError("need as many targets as exponents")
    rep = body_contains(
        ExponentTuple(tuple(args.exponents)),
        MomentVector(tuple(args.targets)),
        _solver_config(args),
    )
    out = {
        "verdict": rep.verdict.value,
        "level": rep.level,
        "interval": None if rep.interval is None else list(rep.interval),
        "witness": None if rep.witness is None else fn_to_json(rep.witness),
    }
    _emit(json.dumps(out), args.output)
    return EXIT_INFEASIBLE if rep.verdict.value == "Infeasible" else EXIT_OK


def _khintchine_rows(args):
    for p in args.p:
        for q in args.q:
            for n in args.n:
                if n == ASYMPTOTIC:
                    c = constants_asymptotic(p, q)
                else:
                    c = constants_fixed_n(p, q, n)
                yield {
                    "p": p,
                    "q": to_json_value(q),
                    "n": c.n,
                    "A": c.A,
                    "B": c.B,
                    "sharp": list(c.sharp_sides),
                }


def _cmd_khintchine(args) -> int:
    rows = list(_khintchine_rows(args))
    if args.format == "json":
        _emit(json.dumps(rows), args.output)
    else:
        lines = ["p,q,n,A,B,sharp"]
        for r in rows:
            lines.append(",".join([
                repr(r["p"]), str(r["q"]), str(r["n"]),
                repr(r["A"]), repr(r["B"]), "+".join(r["sharp"]),
            ]))
        _emit("\n".join(lines), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    spec = None
    if args.step is not None or args.min_points is not None:
        spec = GridSpec(step=args.step,
                        min_points=args.min_points or GridSpec.min_points)
    verdicts = default_suite(seed=args.seed, mc_count=args.mc_count, spec=spec)
    if args.only:
        verdicts = [v for v in verdicts if args.only in v.name]
    lines = []
    positives = controls = bad = 0
    for v in verdicts:
        lines.append(v.to_json())
        control = v.name.endswith("!neg")
        controls += control
        positives += not control
        if control == v.passed:
            bad += 1
            print(f"unexpected outcome: {v.name} margin {v.margin:.3g}",
                  file=sys.stderr)
    summary = {
        "suite": {
            "checks": positives,
            "negative_controls": controls,
            "unexpected": bad,
            "seed": args.seed,
            "ok": bad == 0,
        }
    }
    lines.append(json.dumps(summary))
    _emit("\n".join(lines), args.output)
    print(f"{positives} checks, {controls} negative controls, "
          f"{bad} unexpected outcomes", file=sys.stderr)
    return EXIT_OK if bad == 0 else EXIT_FAIL


def _cmd_grid(args) -> int:
    n = len(args.exponents) - 1
    if n < 1:
        raise _UsageError("need at least two exponents")
    if len(args.base) != n:
        raise _UsageError("base point needs one entry per constraint exponent")
    if not (0 <= args.axis < n):
        raise _UsageError(f"axis must be in 0..{n - 1}")
    if args.count < 2:
        raise _UsageError("count must be at least 2")
    step = (args.stop - args.start) / (args.count - 1)
    points = []
    for i in range(args.count):
        pt = list(args.base)
        pt[args.axis] = args.start + i * step
        points.append(tuple(pt))
    rows = envelope_grid(ExponentTuple(tuple(args.exponents)), args.axis,
                         points, _solver_config(args))
    if args.format == "json":
        out = [
            {"constraints": list(r.constraints), "lo": _finite_or_none(r.lo),
             "hi": _finite_or_none(r.hi), "status": r.status}
            for r in rows
        ]
        _emit(json.dumps(out), args.output)
    else:
        _emit("\n".join(grid_csv_lines(n, rows)), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _add_exponents(sp, how_many: str):
    sp.add_argument("--exponents", type=float, nargs="+", required=True,
                    metavar="P", help=f"moment exponents ({how_many})")


def _add_targets(sp):
    sp.add_argument("--targets", type=float, nargs="+", required=True,
                    metavar="M", help="prescribed moment values")


def _add_common(sp):
    sp.add_argument("--tolerance", type=float, default=None,
                    help="solver relative residual tolerance")
    sp.add_argument("--output", default=None, metavar="PATH",
                    help="write machine output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logmoment",
                     description="Moment problem for symmetric log-concave "
                                 "functions and sharp Khintchine constants")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    sp = sub.add_parser("moments", help="evaluate moments of a function")
    sp.add_argument("--function", help="function descriptor as inline JSON")
    sp.add_argument("--function-file", metavar="PATH",
                    help="file with the JSON descriptor ('-' for stdin)")
    _add_exponents(sp, "any number")
    sp.add_argument("--output", default=None, metavar="PATH")
    sp.set_defaults(handler=_cmd_moments)

    sp = sub.add_parser("invert", help="recover a family member from moments")
    sp.add_argument("--sign", required=True, choices=["+", "-"],
                    help="which extremal family")
    _add_exponents(sp, "one per target")
    _add_targets(sp)
    _add_common(sp)
    sp.set_defaults(handler=_cmd_invert)

    sp = sub.add_parser("envelope", help="range of the next moment")
    _add_exponents(sp, "constraints plus the queried exponent, in order")
    _add_targets(sp)
    _add_common(sp)
    sp.set_defaults(handler=_cmd_envelope)

    sp = sub.add_parser("body", help="moment-body membership of a target vector")
    _add_exponents(sp, "one per target")
    _add_targets(sp)
    _add_common(sp)
    sp.set_defaults(handler=_cmd_body)

    sp = sub.add_parser("khintchine", help="sharp constants over a (p, q, n) grid")
    sp.add_argument("--p", type=float, nargs="+", required=True, metavar="P")
    sp.add_argument("--q", type=_ext_real, nargs="+", required=True, metavar="Q",
                    help="ball exponents, 'inf' allowed")
    sp.add_argument("--n", type=_n_value, nargs="+", default=[ASYMPTOTIC],
                    metavar="N", help="dimensions, or 'asymptotic' (default)")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--output", default=None, metavar="PATH")
    sp.set_defaults(handler=_cmd_khintchine)

    sp = sub.add_parser("verify", help="run the numerical check suite")
    sp.add_argument("--seed", type=int,
                    default=int(os.environ.get(SEED_ENV, _DEFAULT_SEED)),
                    help=f"master seed (default from ${SEED_ENV})")
    sp.add_argument("--mc-count", type=int, default=200_000,
                    help="samples per Monte Carlo check")
    sp.add_argument("--step", type=float, default=None,
                    help="override the convolution grid step")
    sp.add_argument("--min-points", type=int, default=None,
                    help="minimum grid points per factor")
    sp.add_argument("--only", default=None, metavar="SUBSTRING",
                    help="report only verdicts whose name contains this")
    sp.add_argument("--output", default=None, metavar="PATH")
    sp.set_defaults(handler=_cmd_verify)

    sp = sub.add_parser("grid", help="envelope endpoints along one constraint axis")
    _add_exponents(sp, "constraints plus the queried exponent")
    sp.add_argument("--base", type=float, nargs="+", required=True, metavar="M",
                    help="base constraint vector")
    sp.add_argument("--axis", type=int, required=True,
                    help="constraint coordinate to vary (0-based)")
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--count", type=int, default=21)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_grid)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "subcommand", None) is None:
            parser.print_help(sys.stderr)
            return EXIT_BAD_INPUT
        return args.handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NonConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except LogMomentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
