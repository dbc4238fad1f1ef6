"""Analytic test functions with derivative-norm bounds for error estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np

from .bspline import q_average_polynomial

__all__ = ["TestFunction", "test_function_registry", "available_functions", "poly_q_averages"]


def _dual(np_fn, mp_fn):
    ufunc = np.frompyfunc(mp_fn, 1, 1)

    def f(x):
        x = np.asarray(x)
        if x.dtype == object:
            return ufunc(x)
        return np_fn(x)

    return f


@dataclass(frozen=True)
class TestFunction:
    """A univariate test function.

    ``deriv_norm(r, lo, hi)`` is an exact value or an upper bound for
    ``max |f^{(r)}|`` on ``[lo, hi]``.  Polynomials also carry their exact
    rational coefficients so q-averages can be formed without quadrature.
    """

    __test__ = False  # not a pytest class

    name: str
    f: Callable
    deriv_norm: Callable[[int, float, float], float]
    default_domain: tuple[float, float]
    poly_coeffs: Optional[tuple[Fraction, ...]] = None

    def __call__(self, x):
        return self.f(x)


def _sin_norm(r, lo, hi):
    return 1.0


def _exp_norm(r, lo, hi):
    return math.exp(hi)


def _runge_norm(r, lo, hi):
    # 1/(1+25x^2) = Re 1/(1+5ix); the r-th derivative of the latter is bounded by r! 5^r
    return math.factorial(r) * 5.0 ** r


def _gauss_norm(r, lo, hi):
    # Cramer's bound |H_r(x)| exp(-x^2/2) <= 1.0865 2^{r/2} sqrt(r!)
    return 1.0865 * 2 ** (r / 2) * math.sqrt(math.factorial(r))


def _poly(coeffs: Sequence[Fraction]) -> TestFunction:
    c = tuple(Fraction(v) for v in coeffs)
    while len(c) > 1 and c[-1] == 0:
        c = c[:-1]
    cf = [float(v) for v in c]

    def f(x):
        x = np.asarray(x)
        if x.dtype == object:
            cm = [mpmath.mpf(v.numerator) / v.denominator for v in c]
            out = x * 0 + cm[-1]
            for v in reversed(cm[:-1]):
                out = out * x + v
            return out
        out = np.full(x.shape, cf[-1])
        for v in reversed(cf[:-1]):
            out = out * x + v
        return out

    def norm(r, lo, hi):
        big = max(abs(lo), abs(hi))
        return float(sum(abs(v) * math.perm(k, r) * big ** (k - r)
                         for k, v in enumerate(c) if k >= r))

    name = "poly:" + ",".join(str(v) for v in c)
    return TestFunction(name, f, norm, (-1.0, 1.0), c)


_NAMED = {
    "sin": TestFunction("sin", _dual(np.sin, mpmath.sin), _sin_norm, (0.0, 2 * math.pi)),
    "exp": TestFunction("exp", _dual(np.exp, mpmath.exp), _exp_norm, (0.0, 1.0)),
    "runge": TestFunction("runge", _dual(lambda x: 1 / (1 + 25 * x * x), lambda x: 1 / (1 + 25 * x * x)),
                          _runge_norm, (-1.0, 1.0)),
    "gauss": TestFunction("gauss", _dual(lambda x: np.exp(-x * x), lambda x: mpmath.exp(-x * x)),
                          _gauss_norm, (-2.0, 2.0)),
}


def available_functions() -> list[str]:
    return sorted(_NAMED) + ["poly:<c0,c1,...>"]


def test_function_registry(name: str) -> TestFunction:
    """Look up ``sin``, ``exp``, ``runge``, ``gauss`` or ``poly:c0,c1,...`` (ascending coefficients)."""
    if name in _NAMED:
        return _NAMED[name]
    if name.startswith("poly:"):
        body = name[5:]
        try:
            coeffs = [Fraction(tok) for tok in body.split(",")]
        except (ValueError, ZeroDivisionError):
            raise KeyError(f"bad polynomial coefficients in {name!r}") from None
        if not body or not coeffs:
            raise KeyError("poly: needs at least one coefficient")
        return _poly(coeffs)
    raise KeyError(f"unknown test function {name!r}; choose from {', '.join(available_functions())}")


def poly_q_averages(coeffs: Sequence[Fraction], q: int, h: Fraction, origin: Fraction,
                    count: int) -> list[Fraction]:
    """Exact q-averages at ``origin + i*h``, i < count, by re-centering the polynomial."""
    c = [Fraction(v) for v in coeffs]
    out = []
    for i in range(count):
        x0 = Fraction(origin) + i * Fraction(h)
        # coefficients of P(x0 + y) in y
        shifted = [sum((c[k] * math.comb(k, e) * x0 ** (k - e) for k in range(e, len(c))), Fraction(0))
                   for e in range(len(c))]
        out.append(q_average_polynomial(shifted, q, h, 0))
    return out
