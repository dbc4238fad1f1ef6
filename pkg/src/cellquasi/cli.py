"""Command-line front end: ``coeffs``, ``reconstruct``, ``quasi`` and ``converge``."""

from __future__ import annotations

import argparse
import itertools
import math
import sys
from typing import Sequence

import numpy as np

from .cell2point import reconstruct_grid_kd, solve_coefficients
from .convergence import BOUNDARY_MODES, ExperimentSpec, run_convergence
from .exact import format_rational
from .grid import FieldFormatError, format_field, read_field
from .quasiinterp import build_quasi_interpolant_kd, central_factorial_t, evaluate, quasi_coefficients
from .registry import test_function_registry

MAX_M = 60
MAX_P = 40


class UsageError(Exception):
    pass


def _auto_or_int(text: str):
    if text == "auto":
        return "auto"
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a non-negative integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("value must be non-negative")
    return v


def _interval(text: str):
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")


def _point(text: str):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated coordinates, got {text!r}")


def _global_flags(parser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--output", "-o", default=d("-"), help="output path (default: stdout)")
    parser.add_argument("--ghosts", type=_auto_or_int, default=d("auto"),
                        help="ghost samples per side: auto or N")
    parser.add_argument("--fit-degree", type=_auto_or_int, default=d("auto"),
                        help="extrapolation degree for ghost samples: auto or N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cellquasi", description=__doc__)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", help="print exact coefficient tables")
    _global_flags(c, suppress=True)
    c.add_argument("kind", choices=("recon", "quasi", "cfn"))
    c.add_argument("--m", type=int)
    c.add_argument("--p", type=int)
    c.add_argument("--i", type=int)
    c.add_argument("--j", type=int)

    r = sub.add_parser("reconstruct", help="point values from a cell-average field")
    _global_flags(r, suppress=True)
    r.add_argument("input")
    r.add_argument("--m", type=int, nargs="+", required=True, help="stencil half-width, one or per axis")

    q = sub.add_parser("quasi", help="sample a quasi-interpolating spline built from q-averages")
    _global_flags(q, suppress=True)
    q.add_argument("input")
    q.add_argument("--p", type=int, nargs="+", required=True, help="spline degree, one or per axis")
    q.add_argument("--q", type=int, required=True, help="averaging order of the input data")
    q.add_argument("--samples", type=int, default=None,
                   help="evaluation points per axis over the data domain (default 10 per cell)")
    q.add_argument("--at", type=_point, action="append", help="explicit evaluation point x1,x2,...")

    v = sub.add_parser("converge", help="grid-refinement study as CSV")
    _global_flags(v, suppress=True)
    v.add_argument("--mode", choices=("reconstruct", "quasi"), required=True)
    v.add_argument("--function", required=True, help="sin, exp, runge, gauss or poly:c0,c1,...")
    v.add_argument("--domain", type=_interval, action="append", help="lo:hi, once per axis")
    v.add_argument("--dims", type=int, default=1)
    v.add_argument("--m", type=int)
    v.add_argument("--p", type=int)
    v.add_argument("--q", type=int, default=1)
    v.add_argument("--levels", type=int, default=5)
    v.add_argument("--base-cells", type=int, default=32)
    v.add_argument("--boundary", choices=BOUNDARY_MODES, default="supplied-margin")
    v.add_argument("--dps", type=int, default=None, help="run in mpmath with this many digits")
    return parser


def _per_axis(values: Sequence[int], k: int, name: str):
    if len(values) == 1:
        return tuple(values) * k
    if len(values) != k:
        raise UsageError(f"--{name} needs 1 or {k} values, got {len(values)}")
    return tuple(values)


def cmd_coeffs(args) -> str:
    if args.kind == "recon":
        if args.m is None or not 0 <= args.m <= MAX_M:
            raise UsageError(f"coeffs recon needs --m in 0..{MAX_M}")
        co = solve_coefficients(args.m)
        lines = [f"# a_1..a_{args.m} (a_0 = 1)"] + [format_rational(v) for v in co.a[1:]]
        lines.append(f"# error coefficient a_{args.m + 1}: {format_rational(co.err_coeff)}")
    elif args.kind == "quasi":
        if args.p is None or not 1 <= args.p <= MAX_P:
            raise UsageError(f"coeffs quasi needs --p in 1..{MAX_P}")
        co = quasi_coefficients(args.p)
        lines = [f"# c_{args.p},j for j = 0..{args.p // 2} (symmetric)"]
        lines += [format_rational(v) for v in co.c]
        lines.append(f"norm: {format_rational(co.norm)}")
    else:
        if args.i is None or args.j is None or args.i < 0 or args.j < 0 or args.i > 4 * MAX_P:
            raise UsageError(f"coeffs cfn needs --i in 0..{4 * MAX_P} and --j >= 0")
        lines = [format_rational(central_factorial_t(args.i, args.j))]
    return "\n".join(lines) + "\n"


def _fit(args):
    return None if args.fit_degree == "auto" else args.fit_degree


def cmd_reconstruct(args) -> str:
    field = read_field(args.input)
    if field.q != 1:
        raise RuntimeError(f"q mismatch: reconstruction needs cell averages (q=1), file has q={field.q}")
    ms = _per_axis(args.m, field.k, "m")
    if any(m < 0 for m in ms):
        raise UsageError("--m must be non-negative")
    out = reconstruct_grid_kd(field, ms, ghosts=args.ghosts, fit_degree=_fit(args))
    return format_field(out)


def cmd_quasi(args) -> str:
    field = read_field(args.input)
    if field.q != args.q:
        raise RuntimeError(f"q mismatch: file has q={field.q}, --q {args.q}")
    ps = _per_axis(args.p, field.k, "p")
    if any(p < 1 for p in ps):
        raise UsageError("--p must be at least 1")
    spline = build_quasi_interpolant_kd(field, ps, args.q, ghosts=args.ghosts, fit_degree=_fit(args))
    if args.at:
        pts = np.array(args.at, dtype=float)
        if pts.shape[1] != field.k:
            raise UsageError(f"--at points need {field.k} coordinates")
    else:
        axes = []
        for l in range(field.k):
            half = field.h[l] / 2 if field.q >= 1 else 0.0
            lo = max(field.origin[l] - half, spline.domain_box[l][0])
            hi = min(field.origin[l] + (field.shape[l] - 1) * field.h[l] + half, spline.domain_box[l][1])
            count = args.samples or 10 * field.shape[l] + 1
            axes.append(np.linspace(lo, hi, count))
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
    vals = evaluate(spline, pts)
    names = ["x"] if field.k == 1 else [f"x{l + 1}" for l in range(field.k)]
    lines = [",".join(names + ["value"])]
    for pt, v in zip(pts, np.atleast_1d(vals)):
        lines.append(",".join(repr(float(c)) for c in pt) + f",{float(v)!r}")
    return "\n".join(lines) + "\n"


def cmd_converge(args) -> str:
    try:
        fn = test_function_registry(args.function)
    except KeyError as exc:
        raise UsageError(str(exc.args[0]))
    domain = args.domain or [fn.default_domain] * args.dims
    if len(domain) == 1 and args.dims > 1:
        domain = domain * args.dims
    try:
        spec = ExperimentSpec(
            mode=args.mode, test_function=args.function, domain=tuple(domain), m=args.m, p=args.p,
            q=1 if args.mode == "reconstruct" else args.q, refinement_levels=args.levels,
            base_cells=args.base_cells, boundary=args.boundary, fit_degree=_fit(args), dps=args.dps)
    except ValueError as exc:
        raise UsageError(str(exc))
    return run_convergence(spec).to_csv()


COMMANDS = {"coeffs": cmd_coeffs, "reconstruct": cmd_reconstruct, "quasi": cmd_quasi,
            "converge": cmd_converge}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cellquasi {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (FieldFormatError, OSError, ValueError, RuntimeError) as exc:
        print(f"cellquasi {args.command}: {exc}", file=sys.stderr)
        return 1
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
