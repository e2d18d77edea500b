import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from fracperim.closedform import ball_perimeter_closed
from fracperim.errors import DomainError, InfinitePerimeterError
from fracperim.fourier_route import (
    assert_divergence_above_half,
    ball_hat,
    ball_perimeter_fourier,
    fourier_prefactor,
    radial_integral,
    radial_integrand,
)
from fracperim.specfun import ball_volume, gamma, sphere_area, weber_schafheitlin

from conftest import rel

N_GRID = (2, 3, 4, 7)
S_GRID = (0.05, 0.1, 0.25, 0.4, 0.45)


def test_ball_hat_plane():
    for rho in (0.1, 0.7, 1.0, 3.3):
        assert rel(ball_hat(2, rho), special.jv(1, 2 * math.pi * rho) / rho) <= 1e-13


@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_ball_hat_near_origin_is_volume(n):
    assert rel(ball_hat(n, 1e-4), ball_volume(n)) <= 1e-6


def test_ball_hat_half_integer_closed_form():
    z = 2 * math.pi
    j32 = math.sqrt(2 / (math.pi * z)) * (math.sin(z) / z - math.cos(z))
    assert abs(ball_hat(3, 1.0) - j32) <= 1e-15


def test_ball_hat_domain():
    with pytest.raises(DomainError):
        ball_hat(2, 0.0)
    with pytest.raises(DomainError):
        ball_hat(3, np.array([1.0, -1.0]))


@given(st.integers(2, 9), st.floats(0.01, 0.49), st.floats(1e-3, 200.0))
def test_radial_integrand_non_negative(n, s, r):
    assert radial_integrand(n, s, r) >= 0.0


def test_radial_integrand_examples():
    assert rel(radial_integrand(2, 0.25, 1.0), special.jv(1, 2 * math.pi) ** 2) <= 1e-13
    # small-r asymptote r^(2s-1) (pi r)^N / Gamma(N/2 + 1)^2
    for n, s in ((2, 0.1), (3, 0.3), (5, 0.45)):
        r = 1e-5
        lead = r ** (2 * s - 1) * (math.pi * r) ** n / gamma(n / 2 + 1) ** 2
        assert rel(radial_integrand(n, s, r), lead) <= 1e-8


def test_fourier_example_plane_quarter():
    rep = ball_perimeter_fourier(2, 0.25, 1e-8)
    assert rep.converged
    closed = ball_perimeter_closed(2, 0.25)
    assert abs(closed - 124.3) < 0.05
    assert rel(rep.perimeter, closed) <= 1e-8


@pytest.mark.parametrize("n", N_GRID)
@pytest.mark.parametrize("s", S_GRID)
def test_route_equality_and_weber_check(n, s):
    rep = ball_perimeter_fourier(n, s, 1e-8)
    assert rep.converged
    assert rel(rep.perimeter, ball_perimeter_closed(n, s)) <= 1e-7
    assert rel(rep.radial_integral.value, rep.ws_closed_value) <= 1e-8
    # report invariant
    assert rel(rep.perimeter, rep.prefactor * sphere_area(n) * rep.radial_integral.value) <= 1e-15


@pytest.mark.parametrize("n", N_GRID)
@pytest.mark.parametrize("s", S_GRID)
def test_radial_integral_gamma_form(n, s):
    expected = (gamma(1 - 2 * s) * gamma((n + 2 * s) / 2)
                / (2 * math.pi ** (2 * s) * gamma(1 - s) ** 2 * gamma((n + 2 - 2 * s) / 2)))
    assert rel(weber_schafheitlin(n / 2, n / 2, 1 - 2 * s, 2 * math.pi), expected) <= 1e-13


@given(st.integers(2, 12), st.floats(0.01, 0.49))
def test_prefactor_identity(n, s):
    ws = weber_schafheitlin(n / 2, n / 2, 1 - 2 * s, 2 * math.pi)
    assert rel(fourier_prefactor(n, s) * sphere_area(n) * ws, ball_perimeter_closed(n, s)) <= 1e-12


def test_near_half_still_converges():
    rep = ball_perimeter_fourier(3, 0.49, 1e-6)
    assert rep.converged
    closed = ball_perimeter_closed(3, 0.49)
    assert rel(rep.perimeter, closed) <= 1e-6
    # the blow-up factor Gamma(1-2s)/s dominates the size; removing it leaves a tame function of s
    assert closed > 10 * ball_perimeter_closed(3, 0.25)
    tame = [ball_perimeter_closed(3, t) * t / gamma(1 - 2 * t) for t in (0.45, 0.49, 0.499)]
    assert max(tame) / min(tame) < 1.2


def test_fourier_refuses_s_at_or_above_half():
    for s in (0.5, 0.7):
        with pytest.raises(InfinitePerimeterError):
            ball_perimeter_fourier(2, s)
        with pytest.raises(InfinitePerimeterError):
            radial_integral(2, s)
    with pytest.raises(DomainError):
        ball_perimeter_fourier(2, 0.25, tol=0.0)


def test_divergence_at_half_is_logarithmic():
    p = assert_divergence_above_half(2, 0.5)
    steps = np.diff(p)
    assert np.all(steps > 0)
    # equal increments per decade: log(10) / (2 pi^2)
    assert np.allclose(steps, math.log(10) / (2 * math.pi ** 2), rtol=0.02)


def test_divergence_above_half_is_power_law():
    s = 0.6
    p = assert_divergence_above_half(3, s)
    steps = np.diff(p)
    assert np.all(steps > 0)
    # increments grow by 10^(2s-1) per decade
    assert np.allclose(steps[1:] / steps[:-1], 10 ** (2 * s - 1), rtol=0.02)


def test_divergence_domain():
    with pytest.raises(DomainError):
        assert_divergence_above_half(2, 0.499)
    # inside the valid domain the integral is finite
    assert math.isfinite(radial_integral(2, 0.499, 1e-6).value)
