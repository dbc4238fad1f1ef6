"""
Exact coefficient tables
========================

Everything that feeds a stencil is computed in ``fractions.Fraction``.
This script prints the tables that the CLI ``coeffs`` subcommand exposes.
"""
from cellquasi import central_factorial_t, matrix_entry, quasi_coefficients, rhs_entry, solve_coefficients

m = 5
print(f"lower-triangular system for m={m}")
for i in range(1, m + 1):
    row = [str(matrix_entry(i, j)) for j in range(1, i + 1)]
    print("  ", "  ".join(f"{v:>14s}" for v in row), " | ", rhs_entry(i))
print("solution:", [str(v) for v in solve_coefficients(m).a[1:]])

print("\ncentral factorial numbers t(i, j), i = 0..8")
for i in range(9):
    print("  ", " ".join(f"{str(central_factorial_t(i, j)):>8s}" for j in range(i + 1)))

print("\nquasi-interpolation weights")
for p in range(1, 10):
    co = quasi_coefficients(p)
    print(f"  p={p}: {', '.join(str(c) for c in co.c)}  (norm {co.norm})")
