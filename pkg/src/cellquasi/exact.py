"""Exact rational arithmetic for coefficient tables.

:class:`fractions.Fraction` already stores a reduced numerator/denominator
pair over Python's arbitrary-precision integers, with a positive denominator
and zero as ``0/1``.  This module exposes it under the names the rest of the
package uses and adds the small helpers needed around it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

Rational = Fraction

__all__ = [
    "Rational",
    "rat",
    "rat_add",
    "rat_sub",
    "rat_mul",
    "rat_div",
    "binomial",
    "to_float",
    "format_rational",
    "parse_rational",
    "cast_weights",
]


def rat(value, denominator=None) -> Fraction:
    """Build a reduced rational from an int, a Fraction, a float or a ``"num/den"`` string."""
    if denominator is None:
        return Fraction(value)
    return Fraction(value, denominator)


def rat_add(x: Fraction, y: Fraction) -> Fraction:
    return x + y


def rat_sub(x: Fraction, y: Fraction) -> Fraction:
    return x - y


def rat_mul(x: Fraction, y: Fraction) -> Fraction:
    return x * y


def rat_div(x: Fraction, y: Fraction) -> Fraction:
    """Exact quotient; raises :class:`ZeroDivisionError` when ``y == 0``."""
    if y == 0:
        raise ZeroDivisionError(f"rational division of {x} by zero")
    return x / y


def binomial(n: int, k: int) -> int:
    """C(n, k), with C(n, k) = 0 for k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be non-negative")
    return math.comb(n, k)


def to_float(x: Fraction) -> float:
    """Nearest double (Fraction.__float__ rounds correctly)."""
    return float(x)


def format_rational(x: Fraction) -> str:
    """ASCII ``num/den`` form used in coefficient tables; integers keep the ``/1``-free form."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def cast_weights(weights: Iterable[Fraction], dtype) -> Sequence:
    """Convert exact weights to the number type of the data they will multiply.

    Object arrays are assumed to hold :class:`mpmath.mpf` values; the weights
    are then rounded at the current mpmath precision.  Anything else gets
    doubles.
    """
    if np.dtype(dtype) == np.dtype(object):
        return [mpmath.mpf(w.numerator) / w.denominator for w in map(Fraction, weights)]
    return [float(w) for w in weights]
