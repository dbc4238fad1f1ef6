"""Grid-refinement studies: max errors, empirical orders and a-priori bounds."""

from __future__ import annotations

import contextlib
import io
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .boundary import required_margin
from .bspline import default_nodes, sample_field
from .cell2point import error_bound, reconstruct_grid_kd, solve_coefficients
from .grid import GridField
from .quasiinterp import build_quasi_interpolant_kd, error_bound_quasi, evaluate
from .registry import poly_q_averages, test_function_registry

__all__ = ["ExperimentSpec", "OrderReport", "run_convergence", "empirical_orders"]

BOUNDARY_MODES = ("supplied-margin", "ghost-extension")


@dataclass(frozen=True)
class ExperimentSpec:
    """One refinement study.

    ``mode`` is ``"reconstruct"`` (uses ``m``) or ``"quasi"`` (uses ``p`` and
    ``q``).  Level ``i`` has ``base_cells * 2**i`` cells per axis with nodes at
    the cell centres.  In k dimensions the test function is the product of
    the univariate one over the axes.  ``dps`` switches the whole computation
    to mpmath with that many digits.
    """

    mode: str
    test_function: str
    domain: tuple[tuple[float, float], ...]
    m: Optional[int] = None
    p: Optional[int] = None
    q: int = 1
    refinement_levels: int = 5
    base_cells: int = 32
    boundary: str = "supplied-margin"
    fit_degree: Optional[int] = None
    dps: Optional[int] = None
    oversample: Optional[int] = None

    def __post_init__(self):
        if self.mode not in ("reconstruct", "quasi"):
            raise ValueError(f"mode must be 'reconstruct' or 'quasi', got {self.mode!r}")
        if self.refinement_levels < 2:
            raise ValueError("need at least two refinement levels to estimate an order")
        if self.base_cells < 1:
            raise ValueError("base_cells must be positive")
        if self.boundary not in BOUNDARY_MODES:
            raise ValueError(f"boundary must be one of {BOUNDARY_MODES}")
        if self.mode == "reconstruct":
            if self.m is None or self.m < 0:
                raise ValueError("reconstruct mode needs m >= 0")
            if self.q != 1:
                raise ValueError("reconstruction works on cell averages (q=1)")
        else:
            if self.p is None or self.p < 1:
                raise ValueError("quasi mode needs p >= 1")
            if self.q < 0:
                raise ValueError("q must be non-negative")
        dom = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        if not dom or any(not hi > lo for lo, hi in dom):
            raise ValueError("each domain interval needs lo < hi")
        object.__setattr__(self, "domain", dom)
        test_function_registry(self.test_function)

    @property
    def k(self) -> int:
        return len(self.domain)

    @property
    def theoretical_order(self) -> int:
        return 2 * self.m + 2 if self.mode == "reconstruct" else self.p + 1


@dataclass
class OrderReport:
    h: list[float]
    max_error: list[float]
    order: list[float]
    bound: list[float]
    theoretical_order: int
    spec: Optional[ExperimentSpec] = None

    def rows(self):
        return list(zip(self.h, self.max_error, self.order, self.bound))

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.spec is not None:
            for key, value in asdict(self.spec).items():
                buf.write(f"# {key}: {value}\n")
            buf.write(f"# theoretical_order: {self.theoretical_order}\n")
        buf.write("h,max_error,order,bound\n")
        for h, e, o, b in self.rows():
            buf.write(f"{h!r},{e!r},{'' if math.isnan(o) else repr(o)},{'' if math.isnan(b) else repr(b)}\n")
        return buf.getvalue()


def empirical_orders(errors) -> list[float]:
    """log2 of consecutive error ratios; NaN for the first level or a zero error."""
    out = [math.nan]
    for prev, cur in zip(errors, errors[1:]):
        out.append(math.log2(prev / cur) if prev > 0 and cur > 0 else math.nan)
    return out


def _num(x, mp: bool):
    return mpmath.mpf(x) if mp else float(x)


def _samples(spec: ExperimentSpec, fn, q: int, n_cells: int, margin: int, mp: bool) -> GridField:
    hs, origins, shape = [], [], []
    for lo, hi in spec.domain:
        h = (_num(hi, mp) - _num(lo, mp)) / n_cells
        hs.append(h)
        origins.append(_num(lo, mp) + h / 2 - margin * h)
        shape.append(n_cells + 2 * margin)
    if fn.poly_coeffs is not None and spec.k == 1:
        lo, hi = spec.domain[0]
        h_ex = (Fraction(hi) - Fraction(lo)) / n_cells
        vals = poly_q_averages(fn.poly_coeffs, q, h_ex, Fraction(lo) + h_ex / 2 - margin * h_ex, shape[0])
        data = np.array([mpmath.mpf(v.numerator) / v.denominator for v in vals], dtype=object) if mp \
            else np.array([float(v) for v in vals])
        return GridField(data, tuple(hs), tuple(origins), q)

    def prod(*xs):
        out = fn(xs[0])
        for x in xs[1:]:
            out = out * fn(x)
        return out

    nodes = default_nodes(q) + (6 if mp else 0)
    return sample_field(prod, q, shape, tuple(hs), tuple(origins), nodes=nodes)


def _exact_on_grid(fn, axes_pts):
    grids = np.meshgrid(*axes_pts, indexing="ij")
    out = fn(grids[0])
    for g in grids[1:]:
        out = out * fn(g)
    return out


def _max_abs(arr) -> float:
    arr = np.asarray(arr)
    if arr.dtype == object:
        return float(max(abs(v) for v in arr.ravel()))
    return float(np.max(np.abs(arr)))


def _run_level(spec: ExperimentSpec, fn, level: int, mp: bool):
    n = spec.base_cells * 2 ** level
    lo0, hi0 = spec.domain[0]
    h_float = (hi0 - lo0) / n
    supplied = spec.boundary == "supplied-margin"
    if spec.mode == "reconstruct":
        m = spec.m
        field = _samples(spec, fn, 1, n, m if supplied else 0, mp)
        out = reconstruct_grid_kd(field, m, ghosts=0 if supplied else "auto", fit_degree=spec.fit_degree)
        exact = _exact_on_grid(fn, [out.nodes(l) for l in range(spec.k)])
        err = _max_abs(out.data - exact)
        if spec.k == 1:
            omega = (lo0 - (m + 1) * h_float, hi0 + (m + 1) * h_float)
            bound = error_bound(solve_coefficients(m), fn.deriv_norm(2 * m + 2, *omega), h_float)
        else:
            bound = math.nan
        return h_float, err, bound
    p, q = spec.p, spec.q
    margin = required_margin(p=p, q=q)
    field = _samples(spec, fn, q, n, margin if supplied else 0, mp)
    spline = build_quasi_interpolant_kd(field, (p,) * spec.k, q, ghosts=0 if supplied else "auto",
                                        fit_degree=spec.fit_degree)
    over = spec.oversample or (10 if spec.k == 1 else 3)
    axes = []
    for lo, hi in spec.domain:
        cnt = over * n
        axes.append(np.array([_num(lo, mp) + (_num(hi, mp) - _num(lo, mp)) * i / cnt for i in range(cnt + 1)],
                             dtype=object if mp else float))
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    approx = evaluate(spline, pts)
    exact = _exact_on_grid(fn, axes).ravel()
    err = _max_abs(approx - exact)
    if spec.k == 1:
        ext = (q / 2 + (p + 1) / 2 + (p + q) // 2 + 1) * h_float
        C = fn.deriv_norm(p + 1, lo0 - ext, hi0 + ext) / math.factorial(p + 1)
        bound = error_bound_quasi(p, q, C, h_float)
    else:
        bound = math.nan
    return h_float, err, bound


def run_convergence(spec: ExperimentSpec) -> OrderReport:
    """Run every level of ``spec`` and collect errors, orders and bounds."""
    fn = test_function_registry(spec.test_function)
    mp = spec.dps is not None
    ctx = mpmath.workdps(spec.dps) if mp else contextlib.nullcontext()
    hs, errs, bounds = [], [], []
    with ctx:
        for level in range(spec.refinement_levels):
            h, e, b = _run_level(spec, fn, level, mp)
            hs.append(h)
            errs.append(e)
            bounds.append(b)
    return OrderReport(hs, errs, empirical_orders(errs), bounds, spec.theoretical_order, spec)
