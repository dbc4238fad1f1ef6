"""Centered cardinal B-splines, the averaging kernels omega^q and q-average sampling.

``B_p`` is supported on [-(p+1)/2, (p+1)/2] with unit-spaced knots, and the
q-fold convolution of the unit box is ``omega^q = B_{q-1}``.  The q-average of
``f`` at node ``n`` is ``(1/h) * integral f(x) omega^q(x/h - n) dx``; ``q = 0``
means point evaluation.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cache
from typing import Callable, Sequence

import mpmath
import numpy as np

from .exact import binomial, cast_weights
from .grid import GridField

__all__ = [
    "bspline_pieces",
    "bspline_eval",
    "bspline_eval_recursive",
    "omega_eval",
    "gauss_legendre",
    "q_average_sample",
    "q_average_polynomial",
    "sample_field",
    "default_nodes",
]


@cache
def bspline_pieces(p: int) -> tuple[tuple[Fraction, ...], ...]:
    """Exact piecewise-polynomial table of ``B_p``.

    Row ``k`` holds the ascending coefficients in ``u`` of ``B_p`` on
    ``x = k - (p+1)/2 + u`` with ``0 <= u < 1``, from the truncated-power form
    ``(1/p!) sum_i (-1)^i C(p+1, i) (t - i)_+^p``.
    """
    if p < 0:
        raise ValueError("degree must be non-negative")
    rows = []
    for k in range(p + 1):
        c = [Fraction(0)] * (p + 1)
        for i in range(k + 1):
            s = (-1) ** i * binomial(p + 1, i)
            shift = k - i
            # (u + shift)^p expanded in u
            for e in range(p + 1):
                c[e] += s * binomial(p, e) * shift ** (p - e)
        rows.append(tuple(v / math.factorial(p) for v in c))
    return tuple(rows)


def _floor(t: np.ndarray) -> np.ndarray:
    if t.dtype == object:
        return np.array([int(mpmath.floor(v)) for v in t.ravel()], dtype=np.int64).reshape(t.shape)
    return np.floor(t).astype(np.int64)


def bspline_eval(p: int, x):
    """Evaluate ``B_p`` at ``x`` (scalar or array; floats or mpmath numbers).

    ``B_0`` is the indicator of [-1/2, 1/2), which keeps the integer shifts a
    partition of unity.
    """
    scalar = np.ndim(x) == 0
    xa = np.asarray(x)
    if xa.dtype != object:
        xa = xa.astype(float)
    if p >= 1:
        # Even function; the left-hand pieces avoid cancellation near the support end.
        xa = -abs(xa)
    if xa.dtype == object:
        t = xa + mpmath.mpf(p + 1) / 2
    else:
        t = xa + (p + 1) / 2
    k = _floor(t)
    u = t - k
    inside = (k >= 0) & (k <= p)
    table = np.array([cast_weights(row, xa.dtype) for row in bspline_pieces(p)],
                     dtype=xa.dtype if xa.dtype == object else float)
    coefs = table[np.clip(k, 0, p)]
    val = coefs[..., p]
    for e in range(p - 1, -1, -1):
        val = val * u + coefs[..., e]
    zero = val * 0
    out = np.where(inside, val, zero)
    return out[()] if scalar else out


def bspline_eval_recursive(p: int, x: float) -> float:
    """Reference path: Cox-de Boor recurrence on the knots -(p+1)/2, ..., (p+1)/2."""
    knots = [j - (p + 1) / 2 for j in range(p + 2)]
    # degree-0 pieces on [knot_i, knot_{i+1})
    vals = [1.0 if knots[i] <= x < knots[i + 1] else 0.0 for i in range(p + 1)]
    for d in range(1, p + 1):
        vals = [((x - knots[i]) * vals[i] + (knots[i + d + 1] - x) * vals[i + 1]) / d
                for i in range(p + 1 - d)]
    return vals[0]


def omega_eval(q: int, x):
    """The q-fold convolution of the unit box; equals ``B_{q-1}``."""
    if q < 1:
        raise ValueError("omega^0 is a point mass, not a function; use q >= 1")
    return bspline_eval(q - 1, x)


@cache
def _gl_float(n: int):
    return np.polynomial.legendre.leggauss(n)


@cache
def _gl_mp(n: int, dps: int):
    with mpmath.workdps(dps + 10):
        nodes, weights = [], []
        x0, _ = _gl_float(n)
        for guess in x0:
            x = mpmath.mpf(guess)
            for _ in range(100):
                pn = mpmath.legendre(n, x)
                dpn = n * (x * pn - mpmath.legendre(n - 1, x)) / (x * x - 1)
                dx = pn / dpn
                x -= dx
                if abs(dx) < mpmath.mpf(10) ** (-(dps + 8)):
                    break
            pn1 = mpmath.legendre(n - 1, x)
            dpn = n * (x * mpmath.legendre(n, x) - pn1) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dpn * dpn))
    return (np.array([+v for v in nodes], dtype=object),
            np.array([+v for v in weights], dtype=object))


def gauss_legendre(n: int, mp: bool = False):
    """Gauss-Legendre nodes and weights on [-1, 1], in doubles or at the current mpmath precision."""
    if n < 1:
        raise ValueError("need at least one node")
    if mp:
        return _gl_mp(n, mpmath.mp.dps)
    return _gl_float(n)


def default_nodes(q: int, p_max: int = 9) -> int:
    """Gauss points per unit knot interval: ceil((p_max + q + 2)/2) + 2."""
    return -(-(p_max + q + 2) // 2) + 2


def _kernel_rule(q: int, nodes: int, mp: bool):
    """Quadrature points z and weights w with sum w g(z) ~ integral g(z) omega^q(z) dz."""
    xi, wi = gauss_legendre(nodes, mp)
    half = mpmath.mpf(1) / 2 if mp else 0.5
    zs, ws = [], []
    for i in range(q):
        left = -Fraction(q, 2) + i
        lo = mpmath.mpf(left.numerator) / left.denominator if mp else float(left)
        z = lo + half + half * xi
        zs.append(z)
        ws.append(half * wi * omega_eval(q, z))
    return np.concatenate(zs), np.concatenate(ws)


def q_average_sample(f: Callable, q: int, h: float, n, nodes: int | None = None):
    """q-average of ``f`` at node ``n*h`` by Gauss-Legendre on each unit piece of omega^q.

    ``n`` may be an integer array.  If ``h`` is an mpmath number the rule is
    built at the current mpmath precision and ``f`` receives object arrays.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    if q < 0:
        raise ValueError("q must be non-negative")
    mp = isinstance(h, mpmath.mpf)
    na = np.asarray(n)
    if q == 0:
        x = na * h if not mp else np.array([h * int(v) for v in na.ravel()], dtype=object).reshape(na.shape)
        vals = np.asarray(f(x))
    else:
        if nodes is None:
            nodes = default_nodes(q)
        z, w = _kernel_rule(q, nodes, mp)
        if mp:
            x = np.array([[h * (int(v) + zz) for zz in z] for v in na.ravel()], dtype=object)
        else:
            x = h * (na.reshape(-1, 1) + z)
        fx = np.asarray(f(x))
        _check_finite(fx)
        vals = (fx * w).sum(axis=-1).reshape(na.shape)
    _check_finite(vals)
    return vals[()] if na.ndim == 0 else vals


def _check_finite(vals):
    arr = np.asarray(vals)
    ok = np.isfinite(arr.astype(float)) if arr.dtype == object else np.isfinite(arr)
    if not np.all(ok):
        raise ValueError("non-finite function values inside the averaging support")


def sample_field(f: Callable, q: int, shape: Sequence[int], h, origin,
                 nodes: int | None = None) -> GridField:
    """Grid of q-averages of ``f(x_1, ..., x_k)`` at ``origin + i*h`` (tensor quadrature).

    With mpmath ``h`` entries the samples are mpmath numbers in an object array.
    """
    k = len(shape)
    h = tuple(h) if not np.isscalar(h) and not isinstance(h, mpmath.mpf) else (h,) * k
    origin = tuple(origin) if not np.isscalar(origin) and not isinstance(origin, mpmath.mpf) else (origin,) * k
    mp = any(isinstance(v, mpmath.mpf) for v in h)
    if q == 0:
        z, w = (np.array([0], dtype=object if mp else float),
                np.array([1], dtype=object if mp else float))
    else:
        z, w = _kernel_rule(q, nodes or default_nodes(q), mp)
    axes = []
    for l in range(k):
        idx = np.arange(shape[l])
        if mp:
            pts = np.array([[origin[l] + h[l] * (int(i) + zz) for zz in z] for i in idx], dtype=object)
        else:
            pts = origin[l] + h[l] * (idx.reshape(-1, 1) + z)
        axes.append(pts)
    # Broadcast to shape (n1, g, n2, g, ...), then contract the g axes.
    grids = []
    for l in range(k):
        s = [1] * (2 * k)
        s[2 * l], s[2 * l + 1] = shape[l], len(z)
        grids.append(axes[l].reshape(s))
    fx = np.asarray(f(*grids))
    fx = np.broadcast_to(fx, tuple(v for l in range(k) for v in (shape[l], len(z))))
    _check_finite(fx)
    out = fx
    for l in range(k - 1, -1, -1):
        out = np.tensordot(out, w, axes=([2 * l + 1], [0])) if not mp else _contract(out, w, 2 * l + 1)
    return GridField(np.asarray(out, dtype=object if mp else float), h, origin, q)


def _contract(arr: np.ndarray, w: np.ndarray, axis: int) -> np.ndarray:
    out = None
    for j, wj in enumerate(w):
        term = wj * np.take(arr, j, axis=axis)
        out = term if out is None else out + term
    return out


def _poly_box_average(c: list[Fraction]) -> list[Fraction]:
    """Coefficients of y -> integral_{y-1/2}^{y+1/2} P(s) ds."""
    # antiderivative G, then G(y + 1/2) - G(y - 1/2)
    G = [Fraction(0)] + [ck / (k + 1) for k, ck in enumerate(c)]
    out = [Fraction(0)] * len(c)
    half = Fraction(1, 2)
    for k, gk in enumerate(G):
        for e in range(k + 1):
            term = gk * binomial(k, e) * (half ** (k - e) - (-half) ** (k - e))
            if e < len(out):
                out[e] += term
    return out


def q_average_polynomial(poly_coeffs: Sequence, q: int, h, n: int) -> Fraction:
    """Exact q-average of ``sum_k c_k x^k`` at node ``n*h`` (q <= 6, degree <= 9)."""
    c = [Fraction(v) for v in poly_coeffs]
    if q < 0 or q > 6:
        raise ValueError("q must lie in 0..6")
    if len(c) - 1 > 9:
        raise ValueError("polynomial degree must be at most 9")
    h = Fraction(h)
    if h <= 0:
        raise ValueError("h must be positive")
    # work in the unit variable s = x / h
    c = [ck * h ** k for k, ck in enumerate(c)]
    for _ in range(q):
        c = _poly_box_average(c)
    return sum((ck * Fraction(n) ** k for k, ck in enumerate(c)), Fraction(0))
