"""High-order point values and spline quasi-interpolants from cell-average data."""

from .bspline import (bspline_eval, omega_eval, q_average_polynomial, q_average_sample,
                      sample_field)
from .boundary import ExtensionSpec, extend_field, required_margin
from .cell2point import (ReconCoefficients, error_bound, lagrange_oracle_1d, matrix_entry,
                         reconstruct_grid_kd, reconstruct_point_1d, rhs_entry, solve_coefficients)
from .convergence import ExperimentSpec, OrderReport, run_convergence
from .grid import GridField, read_field, write_field
from .quasiinterp import (QuasiCoefficients, QuasiInterpolant, apply_L,
                          build_quasi_interpolant_1d, build_quasi_interpolant_kd,
                          central_factorial_t, error_bound_quasi, evaluate, quasi_coefficients)
from .registry import test_function_registry

__version__ = "0.1.0"
