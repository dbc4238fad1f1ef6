"""Ghost samples for bounded grids by polynomial extrapolation of the data.

The q-averaging operator maps polynomials of degree d to polynomials of
degree d, so extrapolating the sample sequence itself is exact whenever the
underlying function is such a polynomial, and accurate to the same order
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import binomial, cast_weights
from .grid import GridField

__all__ = ["ExtensionSpec", "required_margin", "extend_field", "extrapolation_weights"]


@dataclass(frozen=True)
class ExtensionSpec:
    ghosts_per_side: tuple[int, ...]
    fit_degree: int

    def __post_init__(self):
        g = tuple(int(v) for v in np.atleast_1d(self.ghosts_per_side))
        if any(v < 0 for v in g):
            raise ValueError("ghost counts must be non-negative")
        if self.fit_degree < 0:
            raise ValueError("fit_degree must be non-negative")
        object.__setattr__(self, "ghosts_per_side", g)


def required_margin(p: int | None = None, q: int | None = None, m: int | None = None) -> int:
    """Samples needed beyond the data on each side.

    Reconstruction (``m`` given): the stencil half-width ``m``.
    Quasi-interpolation (``p`` and ``q`` given): ``ceil(q/2 + (p+1)/2) + floor((p+q)/2)``.
    """
    if m is not None:
        if p is not None or q is not None:
            raise ValueError("give either m, or p and q, not both")
        if m < 0:
            raise ValueError("m must be non-negative")
        return m
    if p is None or q is None:
        raise ValueError("quasi-interpolation margin needs both p and q")
    if p < 0 or q < 0:
        raise ValueError("p and q must be non-negative")
    return -((-(q + p + 1)) // 2) + (p + q) // 2


def extrapolation_weights(fit_degree: int, offset: int) -> list[Fraction]:
    """Weights on samples ``0..fit_degree`` giving the fitted polynomial at ``-offset``.

    Newton forward form on integer abscissae: P(x) = sum_k C(x, k) Delta^k y_0,
    with C(-g, k) = (-1)^k C(g+k-1, k).  The Delta^k y_0 terms are expanded back
    onto the samples.
    """
    w = [Fraction(0)] * (fit_degree + 1)
    for k in range(fit_degree + 1):
        coef = (-1) ** k * binomial(offset + k - 1, k) if offset > 0 else (1 if k == 0 else 0)
        if coef == 0:
            continue
        for i in range(k + 1):
            w[i] += coef * (-1) ** (k - i) * binomial(k, i)
    return w


def _extend_axis(data: np.ndarray, axis: int, ghosts: int, fit_degree: int) -> np.ndarray:
    n = data.shape[axis]
    if n < fit_degree + 1:
        raise ValueError(
            f"axis {axis} has {n} samples; degree-{fit_degree} extrapolation needs {fit_degree + 1}")
    if ghosts == 0:
        return data
    left, right = [], []
    for g in range(ghosts, 0, -1):
        w = cast_weights(extrapolation_weights(fit_degree, g), data.dtype)
        lo = hi = None
        for i, wi in enumerate(w):
            a = wi * np.take(data, [i], axis=axis)
            b = wi * np.take(data, [n - 1 - i], axis=axis)
            lo = a if lo is None else lo + a
            hi = b if hi is None else hi + b
        left.append(lo)
        right.insert(0, hi)
    return np.concatenate(left + [data] + right, axis=axis)


def extend_field(field: GridField, spec: ExtensionSpec) -> GridField:
    """Pad each axis with extrapolated ghost samples.

    Axes are processed in ascending order, so corner ghosts come from
    extrapolating an already extended axis.  Original samples are copied
    unchanged.
    """
    ghosts = spec.ghosts_per_side
    if len(ghosts) == 1 and field.k > 1:
        ghosts = ghosts * field.k
    if len(ghosts) != field.k:
        raise ValueError("ghosts_per_side must have one entry per axis")
    data = field.data
    for axis, g in enumerate(ghosts):
        data = _extend_axis(data, axis, g, spec.fit_degree)
    origin = tuple(o - g * h for o, g, h in zip(field.origin, ghosts, field.h))
    return GridField(data, field.h, origin, field.q)
