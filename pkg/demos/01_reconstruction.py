"""
Point values from cell averages
===============================

A finite-volume code stores the mean of ``f`` over every cell.  Here we turn
those means back into point values at the cell centres and watch the error
shrink like h^(2m+2).
"""
import math

import numpy as np

from cellquasi import GridField, reconstruct_grid_kd, sample_field, solve_coefficients
from cellquasi.exact import format_rational

# The correction weights are exact rationals; a_0 = 1 always.
for m in range(1, 5):
    co = solve_coefficients(m)
    print(f"m={m}:", " ".join(format_rational(v) for v in co.a), "| error coeff", format_rational(co.err_coeff))

# Cell averages of sin on [0, 2*pi], then reconstruction with m = 1, 2.
print("\n   n     m=1 error    m=2 error")
for n in (16, 32, 64, 128):
    h = 2 * math.pi / n
    avg = sample_field(np.sin, 1, (n,), h, (h / 2,))
    x = avg.nodes(0)
    errs = [np.max(np.abs(reconstruct_grid_kd(avg, m).data - np.sin(x))) for m in (1, 2)]
    print(f"{n:4d}  {errs[0]:11.3e}  {errs[1]:11.3e}")

# The raw averages alone are only second order.
n = 64
h = 2 * math.pi / n
avg = sample_field(np.sin, 1, (n,), h, (h / 2,))
print("\nusing the averages as point values:", np.max(np.abs(avg.data - np.sin(avg.nodes(0)))))

# Two dimensions: the same 1D weights applied axis by axis.
h = 1 / 32
avg2 = sample_field(lambda x, y: np.exp(x) * np.cos(y), 1, (32, 32), h, (h / 2, h / 2))
pts = reconstruct_grid_kd(avg2, (2, 2))
X, Y = np.meshgrid(pts.nodes(0), pts.nodes(1), indexing="ij")
print("2D m=(2,2) max error:", np.max(np.abs(pts.data - np.exp(X) * np.cos(Y))))
