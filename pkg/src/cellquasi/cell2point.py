"""Point values from cell averages.

With a_0 = 1 and (a_1, ..., a_m) solving a unit lower-triangular system,

    f(a) = sum_{r=0}^{m} a_r Delta^{2r} fbar(a) + O(h^(2m+2)),

where Delta^{2r} is the centered even difference of the cell averages.  The
coefficients are generated exactly and only rounded when applied to data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Sequence

import numpy as np

from . import _stencil
from .boundary import ExtensionSpec, extend_field
from .exact import binomial, cast_weights
from .grid import GridField

__all__ = [
    "ReconCoefficients",
    "matrix_entry",
    "rhs_entry",
    "solve_coefficients",
    "difference_weights",
    "central_difference",
    "reconstruct_point_1d",
    "reconstruct_grid_kd",
    "reconstruction_stencil",
    "error_bound",
    "lagrange_oracle_1d",
]


@dataclass(frozen=True)
class ReconCoefficients:
    """Reconstruction weights ``a = (a_0, ..., a_m)`` and the error coefficient a_{m+1}."""

    m: int
    a: tuple[Fraction, ...]
    err_coeff: Fraction

    def __post_init__(self):
        if len(self.a) != self.m + 1:
            raise ValueError("need m + 1 coefficients")
        if self.a[0] != 1:
            raise ValueError("a_0 must be 1")

    def stencil(self) -> tuple[Fraction, ...]:
        """The equivalent weights on the 2m+1 cell averages."""
        return reconstruction_stencil(self.m)


@cache
def matrix_entry(i: int, j: int) -> Fraction:
    """Coefficient of h^{2i} f^{(2i)} in Delta^{2j} applied to cell averages."""
    if i < 1 or j < 1:
        raise ValueError("matrix indices start at 1")
    if i < j:
        return Fraction(0)
    total = Fraction(0)
    for t in range(i - j + 1):
        e = 2 * (i - t)
        inner = sum((-1) ** s * binomial(2 * j, s) * (s - j) ** e for s in range(j + 1, 2 * j + 1))
        # 1 / 2^(2t-1) is 2 / 4^t
        total += Fraction(2 * inner, 4 ** t * math.factorial(2 * t + 1) * math.factorial(e))
    return total


@cache
def rhs_entry(i: int) -> Fraction:
    if i < 1:
        raise ValueError("rhs index starts at 1")
    return Fraction(-1, math.factorial(2 * i + 1) * 4 ** i)


@cache
def _a(r: int) -> Fraction:
    # The system is unit lower triangular, so each a_r only needs a_1..a_{r-1};
    # a_r therefore does not depend on the truncation m.
    if r == 0:
        return Fraction(1)
    return rhs_entry(r) - sum((matrix_entry(r, s) * _a(s) for s in range(1, r)), Fraction(0))


@cache
def solve_coefficients(m: int) -> ReconCoefficients:
    if m < 0:
        raise ValueError("m must be non-negative")
    return ReconCoefficients(m, tuple(_a(r) for r in range(m + 1)), _a(m + 1))


def difference_weights(r: int) -> tuple[int, ...]:
    """Weights of Delta^{2r} on offsets -r..r."""
    return tuple((-1) ** (r + j) * binomial(2 * r, j + r) for j in range(-r, r + 1))


def central_difference(data, r: int, center: int | None = None):
    """Delta^{2r} of a 1D sequence at index ``center`` (default: the middle)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if center is None:
        center = len(data) // 2
    if center - r < 0 or center + r >= len(data):
        raise IndexError(f"window [{center - r}, {center + r}] outside data of length {len(data)}")
    total = 0
    for j, w in zip(range(-r, r + 1), difference_weights(r)):
        total = total + w * data[center + j]
    return total


@cache
def reconstruction_stencil(m: int) -> tuple[Fraction, ...]:
    coeffs = solve_coefficients(m)
    w = [Fraction(0)] * (2 * m + 1)
    for r, ar in enumerate(coeffs.a):
        for j, d in zip(range(-r, r + 1), difference_weights(r)):
            w[m + j] += ar * d
    return tuple(w)


def reconstruct_point_1d(window, coeffs: ReconCoefficients):
    """Point value at the window center from 2m+1 cell averages."""
    m = coeffs.m
    if len(window) != 2 * m + 1:
        raise ValueError(f"window has {len(window)} values, m={m} needs {2 * m + 1}")
    a = cast_weights(coeffs.a, np.asarray(window).dtype)
    total = 0
    for r in range(m + 1):
        total = total + a[r] * central_difference(window, r, m)
    return total


def reconstruct_grid_kd(field: GridField, m_per_axis: Sequence[int] | int,
                        coeffs_per_axis: Sequence[ReconCoefficients] | None = None,
                        ghosts="auto", fit_degree: int | None = None) -> GridField:
    """Point values at every node of a cell-average grid, one axis at a time.

    ``ghosts="auto"`` pads each axis with ``m`` extrapolated samples so the
    output has the input geometry.  An integer pads every axis by that many
    samples instead; with 0 the caller supplies the margin and the result is
    the interior sub-grid.
    """
    if field.q != 1:
        raise ValueError(f"reconstruction needs cell averages (q=1), got q={field.q}")
    ms = _per_axis(m_per_axis, field.k)
    if coeffs_per_axis is None:
        coeffs_per_axis = [solve_coefficients(m) for m in ms]
    if [c.m for c in coeffs_per_axis] != list(ms):
        raise ValueError("coefficient sets do not match m_per_axis")
    if ghosts == "auto":
        g = ms
    else:
        g = _per_axis(ghosts, field.k)
    if fit_degree is None:
        fit_degree = 2 * max(ms) + 1
    if any(g):
        field = extend_field(field, ExtensionSpec(g, fit_degree))
    for axis, m in enumerate(ms):
        if field.shape[axis] < 2 * m + 1:
            raise ValueError(
                f"axis {axis} has {field.shape[axis]} samples after extension, needs {2 * m + 1}")
    data = _stencil.apply_separable(field.data, [c.stencil() for c in coeffs_per_axis])
    origin = tuple(o + m * h for o, m, h in zip(field.origin, ms, field.h))
    return GridField(data, field.h, origin, 0)


def _per_axis(value, k: int) -> tuple[int, ...]:
    if np.isscalar(value):
        return (int(value),) * k
    t = tuple(int(v) for v in value)
    if len(t) != k:
        raise ValueError(f"expected {k} per-axis values, got {len(t)}")
    return t


def error_bound(coeffs: ReconCoefficients, deriv_norm: float, h: float) -> float:
    """|a_{m+1}| * ||f^{(2m+2)}|| * h^{2m+2}."""
    if deriv_norm < 0 or h <= 0:
        raise ValueError("need deriv_norm >= 0 and h > 0")
    return abs(float(coeffs.err_coeff)) * deriv_norm * h ** (2 * coeffs.m + 2)


def lagrange_oracle_1d(window, m: int) -> float:
    """Center value of a degree-(2m+1) polynomial whose cell averages match ``window``.

    The 2m+1 averaging conditions leave one degree of freedom; the
    minimum-norm coefficient vector is taken.  Everything is solved in exact
    rationals from the (exactly representable) float inputs, so this is an
    independent check on :func:`reconstruct_point_1d`.
    """
    if len(window) != 2 * m + 1:
        raise ValueError(f"window has {len(window)} values, m={m} needs {2 * m + 1}")
    b = [Fraction(float(v)) for v in window]
    deg = 2 * m + 1
    # Average of x^k over [j - 1/2, j + 1/2] in units of h.
    A = [[(Fraction(2 * j + 1, 2) ** (k + 1) - Fraction(2 * j - 1, 2) ** (k + 1)) / (k + 1)
          for k in range(deg + 1)] for j in range(-m, m + 1)]
    rows = len(A)
    G = [[sum(A[i][k] * A[l][k] for k in range(deg + 1)) for l in range(rows)] for i in range(rows)]
    y = _solve_exact(G, b)
    x = [sum(A[i][k] * y[i] for i in range(rows)) for k in range(deg + 1)]
    for i in range(rows):
        if sum(A[i][k] * x[k] for k in range(deg + 1)) != b[i]:
            raise ArithmeticError("oracle fit does not reproduce the averages")
    return float(x[0])


def _solve_exact(M, rhs):
    n = len(M)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] / aug[col][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]
