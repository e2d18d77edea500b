"""P_s(B_1) through Plancherel and the Fourier transform of the ball.

With the transform convention hat f(xi) = int exp(-2 pi i <xi, x>) f(x) dx,

    P_s(B_1) = prefactor * sigma_{N-1} * int_0^inf r^(2s-1) J_{N/2}(2 pi r)^2 dr,
    prefactor = 2 pi^(N/2+2s) Gamma(1-s) / (s Gamma((N+2s)/2)).

The radial integral is evaluated numerically (head on Bessel-zero panels,
oscillatory tail accelerated after removing its non-oscillatory envelope) and
compared with its Weber-Schafheitlin closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, check_dim, check_s
from .quadrature import (
    OscillatoryPlan,
    QuadResult,
    _gk_panels,
    integrate_adaptive,
    integrate_endpoint_singular,
    integrate_oscillatory_tail,
)
from .specfun import (
    _gamma_product,
    bessel_j,
    bessel_j_zeros,
    bessel_modulus_sq,
    modulus_sq_coefficients,
    sphere_area,
    weber_schafheitlin,
)

__all__ = [
    "FourierRouteReport",
    "ball_hat",
    "radial_integrand",
    "fourier_prefactor",
    "radial_integral",
    "ball_perimeter_fourier",
    "assert_divergence_above_half",
]

SPLIT_ZERO = 20
TAIL_ZEROS = 40


@dataclass(frozen=True)
class FourierRouteReport:
    radial_integral: QuadResult
    prefactor: float
    perimeter: float
    ws_closed_value: float

    @property
    def converged(self) -> bool:
        return self.radial_integral.converged

    @property
    def perimeter_error(self) -> float:
        return self.prefactor * self.sphere * self.radial_integral.abs_error_estimate

    @property
    def sphere(self) -> float:
        return self.perimeter / (self.prefactor * self.radial_integral.value)


def ball_hat(n: int, rho):
    """Fourier transform of the unit-ball indicator at radius rho > 0."""
    n = check_dim(n)
    r = np.asarray(rho, dtype=float)
    if np.any(~(r > 0.0)):
        raise DomainError("ball_hat needs rho > 0")
    out = r ** (-0.5 * n) * bessel_j(0.5 * n, 2.0 * math.pi * r)
    return float(out) if np.ndim(out) == 0 else out


def radial_integrand(n: int, s: float, r):
    """r^(2s-1) J_{N/2}(2 pi r)^2."""
    r = np.asarray(r, dtype=float)
    out = r ** (2.0 * s - 1.0) * bessel_j(0.5 * n, 2.0 * math.pi * r) ** 2
    return float(out) if np.ndim(out) == 0 else out


def fourier_prefactor(n: int, s: float) -> float:
    n, s = check_dim(n), check_s(s)
    ratio = _gamma_product((1.0 - s,), (0.5 * (n + 2.0 * s),))
    return 2.0 * math.pi ** (0.5 * n + 2.0 * s) * ratio / s


def _envelope(nu: float, r):
    """Non-oscillatory part of J_nu(2 pi r)^2, i.e. M_nu(2 pi r)^2 / 2."""
    return 0.5 * bessel_modulus_sq(nu, 2.0 * math.pi * np.asarray(r, dtype=float))


def _envelope_tail_integral(nu: float, s: float, R: float) -> float:
    """int_R^inf r^(2s-1) M_nu(2 pi r)^2 / 2 dr, termwise from the asymptotic series."""
    z = 2.0 * math.pi * R
    total = []
    last = math.inf
    for k, bk in enumerate(modulus_sq_coefficients(nu)):
        term = bk * (2.0 * math.pi) ** (-2 * k) * R ** (2.0 * s - 1.0 - 2 * k) / (
            2.0 * math.pi ** 2 * (1.0 + 2 * k - 2.0 * s)
        )
        mag = abs(bk) * z ** (-2 * k)
        if mag > last or (k > 0 and mag < 1e-18):
            break
        total.append(term)
        last = mag
    return math.fsum(total)


def radial_integral(n: int, s: float, tol: float = 1e-8) -> QuadResult:
    """int_0^inf r^(2s-1) J_{N/2}(2 pi r)^2 dr to relative accuracy ``tol``.

    The head [0, R], with R the 20th zero of J_{N/2}(2 pi r), is split at the
    Bessel zeros; on [R, inf) the envelope M^2/2 is integrated in closed form
    and the purely oscillatory remainder is summed over half-wave panels with
    Euler acceleration.
    """
    n, s = check_dim(n), check_s(s, numerical=True)
    nu = 0.5 * n
    zeros = bessel_j_zeros(nu, SPLIT_ZERO + TAIL_ZEROS + 1) / (2.0 * math.pi)
    R = zeros[SPLIT_ZERO - 1]

    def f(r):
        return radial_integrand(n, s, r)

    # rough scale for turning the relative tolerance into absolute ones
    scale = abs(integrate_adaptive(f, 0.0, zeros[0], 1e-3).value)
    abs_tol = tol * scale

    head = integrate_endpoint_singular(f, 0.0, zeros[0], (n - 1.0 + 2.0 * s, 0.0), 0.01 * abs_tol)
    for a, b in zip(zeros[: SPLIT_ZERO - 1], zeros[1:SPLIT_ZERO]):
        head = head + integrate_adaptive(f, a, b, 0.01 * abs_tol / SPLIT_ZERO)

    def remainder(r):
        return r ** (2.0 * s - 1.0) * (bessel_j(nu, 2.0 * math.pi * r) ** 2 - _envelope(nu, r))

    # sign changes of the remainder sit near the quarter points between zeros
    tz = zeros[SPLIT_ZERO - 1:]
    quarter = np.empty(2 * (len(tz) - 1))
    quarter[0::2] = 0.75 * tz[:-1] + 0.25 * tz[1:]
    quarter[1::2] = 0.25 * tz[:-1] + 0.75 * tz[1:]
    tail = integrate_oscillatory_tail(remainder, R, OscillatoryPlan(quarter), 0.1 * abs_tol)
    env = _envelope_tail_integral(nu, s, R)
    env_err = 1e-15 * abs(env)
    total = head + tail + QuadResult(env, env_err, 0, True)
    return QuadResult(total.value, total.abs_error_estimate, total.evaluations,
                      total.converged and total.abs_error_estimate <= tol * abs(total.value))


def ball_perimeter_fourier(n: int, s: float, tol: float = 1e-8) -> FourierRouteReport:
    """P_s(B_1) = prefactor * sigma_{N-1} * radial integral."""
    n, s = check_dim(n), check_s(s, numerical=True)
    if not tol > 0:
        raise DomainError("tol must be positive")
    rad = radial_integral(n, s, tol)
    pref = fourier_prefactor(n, s)
    ws = weber_schafheitlin(0.5 * n, 0.5 * n, 1.0 - 2.0 * s, 2.0 * math.pi)
    return FourierRouteReport(
        radial_integral=rad,
        prefactor=pref,
        perimeter=pref * sphere_area(n) * rad.value,
        ws_closed_value=ws,
    )


def assert_divergence_above_half(n: int, s: float, exponents=(1, 2, 3, 4)) -> np.ndarray:
    """Partial radial integrals over [0, 10^k] for s in [1/2, 1).

    The integrand behaves like r^(2s-2) / (2 pi^2) at infinity, so the
    partial integrals grow like log R (s = 1/2) or R^(2s-1) (s > 1/2) and
    never settle; the returned array is that evidence.  No finite perimeter
    is produced for these orders.
    """
    n = check_dim(n)
    s = float(s)
    if not 0.5 <= s < 1.0:
        raise DomainError(f"divergence evidence is for s in [1/2, 1), got {s:g}")
    # quarter-period panels resolve J^2 exactly with the fixed 21-point rule
    width = 0.125
    partials = []
    total = 0.0
    lo = 0.0
    for k in exponents:
        hi = 10.0 ** k
        m = int(round((hi - lo) / width))
        edges = np.linspace(lo, hi, m + 1)
        vals, _, _ = _gk_panels(lambda r: radial_integrand(n, s, r), edges[:-1], edges[1:])
        total += math.fsum(vals)
        partials.append(total)
        lo = hi
    return np.array(partials)
