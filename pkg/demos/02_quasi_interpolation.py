"""
Splines straight from averaged data
===================================

Given q-averages of ``f`` (q=1 is the ordinary cell mean) we build a
degree-p B-spline whose control points come from a short symmetric
stencil.  No linear system is solved.
"""
from fractions import Fraction

import numpy as np

from cellquasi import GridField, build_quasi_interpolant_1d, evaluate, quasi_coefficients, sample_field
from cellquasi.registry import poly_q_averages

# Stencil weights for a few degrees; the stencil for averaged data of order q
# is simply the one for degree p+q.
for p in (2, 3, 4, 5):
    co = quasi_coefficients(p)
    print(f"p={p}: c = {[str(c) for c in co.c]}, ||L|| = {co.norm}")

# Cubic data is reproduced to rounding error.
P = [Fraction(1), Fraction(-1, 2), Fraction(0), Fraction(2)]
h = Fraction(1, 10)
data = np.array([float(v) for v in poly_q_averages(P, 1, h, Fraction(0), 21)])
spline = build_quasi_interpolant_1d(GridField(data, float(h), 0.0, q=1), 3)
x = np.linspace(0, 2, 7)
print("\ncubic reproduction error:", np.max(np.abs(evaluate(spline, x) - (1 - x / 2 + 2 * x ** 3))))

# Convergence on exp with cell-average (q=1) and second-order (q=2) data.
print("\n   n   (p,q)=(3,1)   (p,q)=(3,2)")
for n in (16, 32, 64, 128):
    hh = 1 / n
    row = []
    for q in (1, 2):
        field = sample_field(np.exp, q, (n,), hh, (hh / 2,))
        s = build_quasi_interpolant_1d(field, 3, q)
        xs = np.linspace(0, 1, 10 * n + 1)
        row.append(np.max(np.abs(evaluate(s, xs) - np.exp(xs))))
    print(f"{n:4d}  {row[0]:11.3e}  {row[1]:11.3e}")
