"""Fractional s-perimeter of the unit ball by independent routes.

Closed form, Fourier/Bessel quadrature, a real-space double integral, an
eigenvalue chain, and Monte Carlo estimates for general shapes, with checks
of the nonlocal isoperimetric inequality and its limits as s -> 0 and 1/2.
"""

from .closedform import (
    ConstantReport,
    ball_perimeter_closed,
    ball_perimeter_via_eigenvalue,
    best_constant,
    constant_report,
    cos_kernel_constant,
    davila_limit,
    lambda1_s,
    lambda1_star,
    limit_s_to_half,
    limit_s_to_zero,
)
from .errors import ConvergenceError, DomainError, InfinitePerimeterError, Order
from .fourier_route import assert_divergence_above_half, ball_perimeter_fourier, radial_integral
from .isoperimetry import QuotientReport, deficit, limit_sweep_half, limit_sweep_zero, quotient
from .quadrature import QuadResult
from .spatial_route import (
    McEstimate,
    ShapeSpec,
    ball_perimeter_spatial,
    frank_seiringer_C,
    mc_perimeter,
    shape_distance,
)

__version__ = "0.1.0"

__all__ = [
    "ConstantReport",
    "ConvergenceError",
    "DomainError",
    "InfinitePerimeterError",
    "McEstimate",
    "Order",
    "QuadResult",
    "QuotientReport",
    "ShapeSpec",
    "assert_divergence_above_half",
    "ball_perimeter_closed",
    "ball_perimeter_fourier",
    "ball_perimeter_spatial",
    "ball_perimeter_via_eigenvalue",
    "best_constant",
    "constant_report",
    "cos_kernel_constant",
    "davila_limit",
    "deficit",
    "frank_seiringer_C",
    "lambda1_s",
    "lambda1_star",
    "limit_s_to_half",
    "limit_s_to_zero",
    "limit_sweep_half",
    "limit_sweep_zero",
    "mc_perimeter",
    "quotient",
    "radial_integral",
    "shape_distance",
]
