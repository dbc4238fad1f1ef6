"""Spline quasi-interpolation from q-average data.

The classical operator ``Q_p f = sum_n L_p(f_{n-s..n+s}) B_p(x/h - n)`` uses
symmetric functionals ``L_p`` built from central factorial numbers.  For
polynomials of degree <= p, ``L_{p+q}`` applied to q-averages equals ``L_p``
applied to point values, so feeding q-averages through ``L_{p+q}`` while
keeping the degree-p basis gives an operator ``Q^q_p`` with the same
reproduction and order as ``Q_p``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Sequence

import numpy as np

from . import _stencil
from .boundary import ExtensionSpec, extend_field, required_margin
from .bspline import bspline_eval
from .exact import binomial, cast_weights
from .grid import GridField

__all__ = [
    "QuasiCoefficients",
    "QuasiInterpolant",
    "central_factorial_t",
    "quasi_coefficients",
    "apply_L",
    "build_quasi_interpolant_1d",
    "build_quasi_interpolant_kd",
    "evaluate",
    "error_bound_quasi",
    "alpha_constant",
]


@cache
def central_factorial_t(i: int, j: int) -> Fraction:
    """Central factorial numbers of the first kind, t(i, j)."""
    if i < 0 or j < 0:
        raise ValueError("indices must be non-negative")
    if j > i:
        return Fraction(0)
    if j == i:
        return Fraction(1)
    if j == 0:
        return Fraction(0)
    if j == 1:
        # i >= 2 here
        out = Fraction(1)
        for l in range(1, i):
            out *= Fraction(i, 2) - l
        return out
    return central_factorial_t(i - 2, j - 2) - Fraction(i - 2, 2) ** 2 * central_factorial_t(i - 2, j)


@dataclass(frozen=True)
class QuasiCoefficients:
    """Half stencil ``c = (c_{p,0}, ..., c_{p,floor(p/2)})`` and ``||L_p||_inf``."""

    p: int
    c: tuple[Fraction, ...]
    norm: Fraction

    @property
    def half_width(self) -> int:
        return self.p // 2

    def stencil(self) -> tuple[Fraction, ...]:
        """Full symmetric stencil on offsets -floor(p/2)..floor(p/2)."""
        return tuple(reversed(self.c[1:])) + self.c


@cache
def quasi_coefficients(p: int) -> QuasiCoefficients:
    if p < 1:
        raise ValueError("p must be at least 1")
    s = p // 2
    up = -(-(p + 1) // 2)
    full = [Fraction(0)] * (2 * s + 1)
    # l runs to floor(p/2): for even p the last central difference is needed
    # to reproduce degree-p polynomials.
    for l in range(s + 1):
        scale = central_factorial_t(2 * l + p + 1, p + 1) / binomial(2 * l + p + 1, p + 1)
        for i in range(2 * l + 1):
            # Kronecker delta: j + 1 + s == l - i + ceil((p+1)/2)
            j = l - i + up - 1 - s
            if -s <= j <= s:
                full[j + s] += scale * Fraction((-1) ** i, math.factorial(i) * math.factorial(2 * l - i))
    half = tuple(full[s:])
    return QuasiCoefficients(p, half, sum((abs(v) for v in full), Fraction(0)))


def apply_L(coeffs: QuasiCoefficients, window):
    """``sum_j c_{p,j} window[j]`` over the symmetric stencil.

    Exact when the window holds Fractions or ints.
    """
    st = coeffs.stencil()
    if len(window) != len(st):
        raise ValueError(f"L_{coeffs.p} needs {len(st)} values, got {len(window)}")
    if all(isinstance(v, (Fraction, int)) for v in window):
        return sum((c * Fraction(v) for c, v in zip(st, window)), Fraction(0))
    w = cast_weights(st, np.asarray(window).dtype)
    total = 0
    for wj, v in zip(w, window):
        total = total + wj * v
    return total


@dataclass(frozen=True)
class QuasiInterpolant:
    """``sum_n ctrl[n] prod_l B_{p_l}((x_l - origin_l)/h_l - n_l)``.

    ``origin`` is the coordinate of ``ctrl[0, ..., 0]``; ``domain_box`` lists
    per-axis ``(lo, hi)`` where every active basis function has a coefficient.
    """

    p: tuple[int, ...]
    q: int
    h: tuple[float, ...]
    origin: tuple[float, ...]
    ctrl: np.ndarray
    domain_box: tuple[tuple[float, float], ...]

    @property
    def k(self) -> int:
        return self.ctrl.ndim

    def __call__(self, x):
        return evaluate(self, x)


def build_quasi_interpolant_1d(field: GridField, p: int, q: int | None = None,
                               ghosts="auto", fit_degree: int | None = None) -> QuasiInterpolant:
    if field.k != 1:
        raise ValueError("use build_quasi_interpolant_kd for multivariate fields")
    return build_quasi_interpolant_kd(field, (p,), q, ghosts=ghosts, fit_degree=fit_degree)


def build_quasi_interpolant_kd(field: GridField, p_per_axis, q: int | None = None,
                               ghosts="auto", fit_degree: int | None = None,
                               direct: bool = False) -> QuasiInterpolant:
    """Spline coefficients ``L_{p+q}`` of the q-averages, axis by axis.

    ``ghosts="auto"`` extends every axis by :func:`required_margin` samples
    using degree ``fit_degree`` (default ``max(p)``) extrapolation; an integer
    extends by that many instead (0: the caller supplied the margin).
    ``direct=True`` applies the full tensor stencil in one pass.
    """
    k = field.k
    ps = (int(p_per_axis),) * k if np.isscalar(p_per_axis) else tuple(int(v) for v in p_per_axis)
    if len(ps) != k:
        raise ValueError(f"need {k} degrees, got {len(ps)}")
    if any(v < 1 for v in ps):
        raise ValueError("degrees must be at least 1")
    if q is None:
        q = field.q
    if field.q != q:
        raise ValueError(f"q mismatch: field holds q={field.q} data, operator expects q={q}")
    if ghosts == "auto":
        g = tuple(required_margin(p=v, q=q) for v in ps)
    else:
        g = (int(ghosts),) * k if np.isscalar(ghosts) else tuple(int(v) for v in ghosts)
    if any(g):
        field = extend_field(field, ExtensionSpec(g, max(ps) if fit_degree is None else fit_degree))
    stencils = [quasi_coefficients(v + q).stencil() for v in ps]
    for axis, st in enumerate(stencils):
        if field.shape[axis] < len(st) + ps[axis] - 1:
            raise ValueError(
                f"axis {axis}: {field.shape[axis]} samples after extension; "
                f"L_{ps[axis] + q} with degree-{ps[axis]} splines needs at least "
                f"{len(st) + ps[axis] - 1} (margin {required_margin(p=ps[axis], q=q)} per side)")
    if direct:
        ctrl = _stencil.apply_direct(field.data, _stencil.tensor_stencil(stencils))
    else:
        ctrl = _stencil.apply_separable(field.data, stencils)
    shift = [len(st) // 2 for st in stencils]
    origin = tuple(o + s * h for o, s, h in zip(field.origin, shift, field.h))
    box = tuple((o + (pl - 1) / 2 * h, o + (n - 1 - (pl - 1) / 2) * h)
                for o, pl, h, n in zip(origin, ps, field.h, ctrl.shape))
    return QuasiInterpolant(ps, q, field.h, origin, ctrl, box)


def _axis_basis(t: np.ndarray, p: int, n_ctrl: int):
    """Active coefficient indices and basis values, shape (npts, p+2)."""
    if t.dtype == object:
        import mpmath
        base = np.array([int(mpmath.ceil(v - mpmath.mpf(p + 1) / 2)) for v in t], dtype=np.int64)
    else:
        base = np.ceil(t - (p + 1) / 2).astype(np.int64)
    idx = base[:, None] + np.arange(p + 2)[None, :]
    vals = bspline_eval(p, t[:, None] - idx)
    valid = (idx >= 0) & (idx < n_ctrl)
    vals = np.where(valid, vals, vals * 0)
    return np.clip(idx, 0, n_ctrl - 1), vals


def evaluate(spline: QuasiInterpolant, x):
    """Evaluate at points ``x`` of shape (k,) or (npts, k); 1D splines also take a flat array."""
    xa = np.asarray(x)
    if xa.dtype != object:
        xa = xa.astype(float)
    k = spline.k
    single = xa.ndim == 0 or (xa.ndim == 1 and k > 1)
    if k == 1 and xa.ndim <= 1:
        pts = xa.reshape(-1, 1)
        single = xa.ndim == 0
    else:
        pts = xa.reshape(-1, k)
    tol = 1e-12
    for l, (lo, hi) in enumerate(spline.domain_box):
        col = pts[:, l].astype(float)
        span = max(hi - lo, spline.h[l])
        if np.any(col < lo - tol * span) or np.any(col > hi + tol * span):
            raise ValueError(f"evaluation point outside valid box on axis {l}: [{lo}, {hi}]")
    idxs, vals = [], []
    for l in range(k):
        t = (pts[:, l] - spline.origin[l]) / spline.h[l]
        i, v = _axis_basis(t, spline.p[l], spline.ctrl.shape[l])
        idxs.append(i)
        vals.append(v)
    out = None
    for combo in itertools.product(*(range(pl + 2) for pl in spline.p)):
        c = spline.ctrl[tuple(idxs[l][:, o] for l, o in enumerate(combo))]
        term = c
        for l, o in enumerate(combo):
            term = term * vals[l][:, o]
        out = term if out is None else out + term
    return out[0] if single else out


def alpha_constant(p: int, q: int) -> float:
    return (q / 2 + (p + 1) / 2 + (p + q) // 2) ** (p + 1)


def error_bound_quasi(p: int, q: int, C: float, h: float) -> float:
    """``((p+2) alpha ||L_{p+q}|| + 1) C h^{p+1}`` with ``C = ||f^{(p+1)}|| / (p+1)!``."""
    if C < 0 or h <= 0:
        raise ValueError("need C >= 0 and h > 0")
    norm = float(quasi_coefficients(p + q).norm)
    return ((p + 2) * alpha_constant(p, q) * norm + 1) * C * h ** (p + 1)
