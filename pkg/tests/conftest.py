from fractions import Fraction

import numpy as np
import pytest


def box_convolution_pieces(p):
    """B_p by repeated exact convolution with the unit box.

    A function is a dict: integer k -> ascending Fraction coefficients of the
    polynomial on [k - (p+1)/2, k + 1 - (p+1)/2) in the local variable u.
    Independent of the truncated-power formula used by the package.
    """
    pieces = {0: [Fraction(1)]}  # B_0 on [-1/2, 1/2)
    for d in range(1, p + 1):
        # Antiderivative of B_{d-1} as a continuous piecewise polynomial.
        anti, acc = {}, Fraction(0)
        for k in range(d):
            c = pieces[k]
            a = [acc] + [ck / (i + 1) for i, ck in enumerate(c)]
            anti[k] = a
            acc = sum(a)
        total = acc
        # B_d(x) = G(x + 1/2) - G(x - 1/2); the breakpoints of B_d sit one half
        # step away from those of B_{d-1}, so local variable u on piece k of B_d
        # maps to u on piece k of G (shifted by +1/2) and piece k-1 (shifted by -1/2).

        def G(k, u):
            if k < 0:
                return Fraction(0)
            if k >= d:
                return total
            return sum(ci * u ** i for i, ci in enumerate(anti[k]))

        new = {}
        for k in range(d + 1):
            # sample d+1 points and interpolate the degree-d piece exactly
            us = [Fraction(i, d) for i in range(d + 1)]
            vals = [G(k, u) - G(k - 1, u) for u in us]
            new[k] = _interp(us, vals)
        pieces = new
    return pieces


def _interp(xs, ys):
    n = len(xs)
    A = [[x ** j for j in range(n)] + [y] for x, y in zip(xs, ys)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def box_convolution_eval(p, x: Fraction) -> Fraction:
    t = Fraction(x) + Fraction(p + 1, 2)
    k = int(t // 1)
    if k < 0 or k > p:
        return Fraction(0)
    u = t - k
    return sum(c * u ** i for i, c in enumerate(box_convolution_pieces(p)[k]))


def cell_average_exact(coeffs, center, h):
    """Exact average of sum c_k x^k over [center - h/2, center + h/2] via the antiderivative."""
    center, h = Fraction(center), Fraction(h)
    a, b = center - h / 2, center + h / 2
    F = lambda x: sum(Fraction(c) * x ** (k + 1) / (k + 1) for k, c in enumerate(coeffs))
    return (F(b) - F(a)) / h


def poly_eval(coeffs, x):
    out = 0
    for c in reversed(coeffs):
        out = out * x + c
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
