"""Closed-form constants for the fractional perimeter of the unit ball.

All quantities are Gamma-function expressions in the dimension ``n`` and the
order ``s``.  Gamma ratios with arguments outside [-5, 30] are evaluated
through log-Gamma differences so that large dimensions do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import check_dim, check_s
from .specfun import (
    _gamma_product,
    angular_projection_constant,
    ball_volume,
    ln_gamma,
    sphere_area,
)

__all__ = [
    "ConstantReport",
    "best_constant",
    "ball_perimeter_closed",
    "cos_kernel_constant",
    "lambda1_star",
    "eigen_operator_prefactor",
    "lambda1_s",
    "ball_perimeter_via_eigenvalue",
    "limit_s_to_zero",
    "limit_s_to_half",
    "davila_limit",
    "constant_report",
]


def _gamma_pow(x: float, e: float) -> float:
    """Gamma(x)**e for x > 0, via ln Gamma."""
    return math.exp(e * ln_gamma(x))


def best_constant(n: int, s: float) -> float:
    r"""Isoperimetric quotient of the unit ball, P_s(B_1) / |B_1|^((N-2s)/N).

    .. math::

        \frac{N \pi^{N/2+s} \Gamma(1-2s)}
             {s\, \Gamma(N/2+1)^{2s/N} \Gamma(1-s) \Gamma((N+2-2s)/2)}
    """
    n, s = check_dim(n), check_s(s)
    ratio = _gamma_product((1.0 - 2.0 * s,), (1.0 - s, 0.5 * (n + 2.0 - 2.0 * s)))
    return n * math.pi ** (0.5 * n + s) * ratio / (s * _gamma_pow(0.5 * n + 1.0, 2.0 * s / n))


def ball_perimeter_closed(n: int, s: float) -> float:
    """P_s(B_1) = best_constant(n, s) * omega_N^((N-2s)/N)."""
    n, s = check_dim(n), check_s(s)
    return best_constant(n, s) * ball_volume(n) ** ((n - 2.0 * s) / n)


def cos_kernel_constant(n: int, s: float) -> float:
    """int_{R^N} (1 - cos h_N) / |h|^(N+2s) dh = pi^(N/2) Gamma(1-s) / (s 4^s Gamma((N+2s)/2))."""
    n, s = check_dim(n), check_s(s)
    ratio = _gamma_product((1.0 - s,), (0.5 * (n + 2.0 * s),))
    return math.pi ** (0.5 * n) * ratio / (s * 4.0 ** s)


def lambda1_star(n: int, s: float) -> float:
    """First eigenvalue of the hypersingular operator on the sphere.

    Gamma((N+2+2s)/2)/Gamma((N-2s)/2) - Gamma((N+2s)/2)/Gamma((N-2-2s)/2).
    For N = 2 the last argument is -s, where Gamma is negative.
    """
    n, s = check_dim(n), check_s(s)
    first = _gamma_product((0.5 * (n + 2.0 + 2.0 * s),), (0.5 * (n - 2.0 * s),))
    second = _gamma_product((0.5 * (n + 2.0 * s),), (0.5 * (n - 2.0 - 2.0 * s),))
    return first - second


def eigen_operator_prefactor(n: int, s: float) -> float:
    """Scale between the sphere operator and its hypersingular part.

    2^(1-2s) pi^((N-1)/2) Gamma((1-2s)/2) / ((1+2s) Gamma((N+2s)/2))
    """
    n, s = check_dim(n), check_s(s)
    ratio = _gamma_product((0.5 * (1.0 - 2.0 * s),), (0.5 * (n + 2.0 * s),))
    return 2.0 ** (1.0 - 2.0 * s) * math.pi ** (0.5 * (n - 1)) * ratio / (1.0 + 2.0 * s)


def lambda1_s(n: int, s: float) -> float:
    return eigen_operator_prefactor(n, s) * lambda1_star(n, s)


def ball_perimeter_via_eigenvalue(n: int, s: float) -> float:
    """P_s(B_1) from the first eigenvalue of the sphere operator.

    The eigenvalue identity sigma_{N-1} lambda_1^s / (2s (N-2s)) measures the
    one-sided interaction int_E int_{E^c} |x-y|^(-N-2s), which is half of the
    squared seminorm used here; the result is doubled accordingly.
    """
    n, s = check_dim(n), check_s(s)
    interaction = sphere_area(n) * lambda1_s(n, s) / (2.0 * s * (n - 2.0 * s))
    return 2.0 * interaction


def limit_s_to_zero(n: int) -> float:
    """lim_{s->0+} s * best_constant(n, s) = sigma_{N-1}."""
    return sphere_area(check_dim(n))


def limit_s_to_half(n: int) -> float:
    """lim_{s->1/2-} (1-2s) P_s(B_1), in the Gamma form of the best constant.

    2N pi^(N/2) omega_N^((N-1)/N) / (Gamma(N/2+1)^(1/N) Gamma((N+1)/2))
    """
    n = check_dim(n)
    ratio = _gamma_product((), (0.5 * (n + 1.0),))
    return (
        2.0 * n * math.pi ** (0.5 * n) * ball_volume(n) ** ((n - 1.0) / n)
        * ratio / _gamma_pow(0.5 * n + 1.0, 1.0 / n)
    )


def davila_limit(n: int) -> float:
    """Same limit as angular projection constant times the perimeter of B_1."""
    n = check_dim(n)
    return angular_projection_constant(n) * sphere_area(n)


@dataclass(frozen=True)
class ConstantReport:
    n: int
    s: float
    best_constant: float
    ball_perimeter: float
    lambda1_star: float
    lambda1_s: float
    cos_kernel: float

    def as_dict(self) -> dict:
        return asdict(self)


def constant_report(n: int, s: float) -> ConstantReport:
    n, s = check_dim(n), check_s(s)
    return ConstantReport(
        n=n,
        s=s,
        best_constant=best_constant(n, s),
        ball_perimeter=ball_perimeter_closed(n, s),
        lambda1_star=lambda1_star(n, s),
        lambda1_s=lambda1_s(n, s),
        cos_kernel=cos_kernel_constant(n, s),
    )
