import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from fracperim.errors import DomainError
from fracperim.quadrature import (
    OscillatoryPlan,
    QuadResult,
    euler_accelerate,
    gauss_kronrod_rule,
    integrate_adaptive,
    integrate_endpoint_singular,
    integrate_oscillatory_tail,
)
from fracperim.specfun import bessel_j


# --- adaptive -----------------------------------------------------------------

def test_adaptive_examples():
    r = integrate_adaptive(lambda x: x * x, 0.0, 1.0, 1e-12)
    assert r.converged and abs(r.value - 1 / 3) <= 1e-15
    r = integrate_adaptive(np.sin, 0.0, math.pi, 1e-12)
    assert r.converged and abs(r.value - 2.0) <= 1e-14


def test_adaptive_bessel_square_against_trapezoid():
    x = np.linspace(0.0, 1.0, 1_000_001)
    y = special.j0(2 * math.pi * x) ** 2
    oracle = (x[1] - x[0]) * (y.sum() - 0.5 * (y[0] + y[-1]))
    r = integrate_adaptive(lambda t: bessel_j(0.0, 2 * math.pi * t) ** 2, 0.0, 1.0, 1e-10)
    assert r.converged and abs(r.value - oracle) <= 1e-9


def test_gauss_kronrod_rule_matches_quadpack_table():
    # first node and centre weight of the QUADPACK qk21 table
    x, wk, wg = gauss_kronrod_rule(10)
    assert len(x) == 21 and np.all(np.diff(x) > 0)
    assert abs(x[-1] - 0.995657163025808080735527280689003) <= 1e-15
    assert abs(wk[10] - 0.149445554002916905664936468389821) <= 1e-15
    assert np.all(wk > 0)
    assert np.all(wg[0::2] == 0.0)


@pytest.mark.parametrize("k", range(0, 32))
def test_kronrod_exact_to_degree_31(k):
    x, wk, wg = gauss_kronrod_rule(10)
    exact = 0.0 if k % 2 else 2.0 / (k + 1)
    assert abs(np.dot(wk, x ** k) - exact) <= 1e-14
    if k < 20:
        assert abs(np.dot(wg, x ** k) - exact) <= 1e-14


def test_adaptive_domain_errors():
    with pytest.raises(DomainError):
        integrate_adaptive(np.sin, 1.0, 0.0, 1e-8)
    with pytest.raises(DomainError):
        integrate_adaptive(np.sin, 0.0, math.inf, 1e-8)
    with pytest.raises(DomainError):
        integrate_adaptive(np.sin, 0.0, 1.0, 0.0)


def test_adaptive_reports_non_convergence():
    r = integrate_adaptive(lambda x: np.sin(1.0 / x), 1e-4, 1.0, 1e-14, max_panels=5)
    assert not r.converged
    assert r.abs_error_estimate > 1e-14


def test_adaptive_deterministic():
    f = lambda x: np.exp(np.sin(7 * x)) / (1 + x * x)
    assert integrate_adaptive(f, -3.0, 4.0, 1e-12) == integrate_adaptive(f, -3.0, 4.0, 1e-12)


@given(st.floats(min_value=0.05, max_value=2.95))
def test_adaptive_additive(c):
    f = lambda x: np.exp(np.sin(5 * x))
    left = integrate_adaptive(f, 0.0, c, 1e-11)
    right = integrate_adaptive(f, c, 3.0, 1e-11)
    whole = integrate_adaptive(f, 0.0, 3.0, 1e-11)
    bound = left.abs_error_estimate + right.abs_error_estimate + whole.abs_error_estimate
    assert abs(left.value + right.value - whole.value) <= bound


@given(st.floats(min_value=1e-13, max_value=1e-3), st.integers(min_value=1, max_value=9))
def test_converged_implies_within_tolerance(tol, k):
    f = lambda x: np.cos(k * x) ** 2 * np.sqrt(x)
    r = integrate_adaptive(f, 0.0, 2.0, tol)
    if r.converged:
        assert r.abs_error_estimate <= tol
    r = integrate_endpoint_singular(lambda x: x ** -0.4 * np.cos(k * x), 0.0, 1.0, (-0.4, 0.0), tol)
    if r.converged:
        assert r.abs_error_estimate <= tol


# --- golden suite -------------------------------------------------------------

GOLDEN = [
    ("exp", lambda: integrate_adaptive(np.exp, 0.0, 1.0, 1e-9), math.e - 1),
    ("sin^2", lambda: integrate_adaptive(lambda x: np.sin(x) ** 2, 0.0, math.pi, 1e-9), math.pi / 2),
    ("arctan", lambda: integrate_adaptive(lambda x: 1 / (1 + x * x), 0.0, 1.0, 1e-9), math.pi / 4),
    ("sqrt", lambda: integrate_adaptive(np.sqrt, 0.0, 1.0, 1e-9), 2 / 3),
    ("1/(2+cos)", lambda: integrate_adaptive(lambda x: 1 / (2 + np.cos(x)), 0.0, 2 * math.pi, 1e-9),
     2 * math.pi / math.sqrt(3)),
    ("gaussian", lambda: integrate_adaptive(lambda x: np.exp(-x * x), 0.0, 10.0, 1e-9),
     0.5 * math.sqrt(math.pi) * math.erf(10.0)),
    ("kink", lambda: integrate_adaptive(lambda x: np.abs(x - 1 / 3), 0.0, 1.0, 1e-9), 5 / 18),
    ("beta", lambda: integrate_endpoint_singular(lambda x, da, db: da ** -0.3 * db ** -0.6, 0.0, 1.0,
                                                 (-0.3, -0.6), 1e-9, with_distances=True),
     special.beta(0.7, 0.4)),
    ("arcsine t^2", lambda: integrate_endpoint_singular(lambda t, da, db: t * t / np.sqrt(da * db), -1.0, 1.0,
                                                        (-0.5, -0.5), 1e-9, with_distances=True), math.pi / 2),
    ("log", lambda: integrate_endpoint_singular(lambda x: np.log(x), 0.0, 1.0, (-0.01, 0.0), 1e-9), -1.0),
]


def test_golden_suite_error_estimates_are_honest():
    honest = 0
    for name, run, exact in GOLDEN:
        r = run()
        assert r.converged, name
        honest += abs(r.value - exact) <= 2.0 * r.abs_error_estimate
    assert honest >= 9


# --- endpoint singularities ---------------------------------------------------

@pytest.mark.parametrize("scheme", ["tanh-sinh", "tanh"])
def test_endpoint_examples(scheme):
    r = integrate_endpoint_singular(lambda x: x ** -0.5, 0.0, 1.0, (-0.5, 0.0), 1e-12, scheme=scheme)
    assert r.converged and abs(r.value - 2.0) <= 1e-11
    r = integrate_endpoint_singular(lambda t: 1 / np.sqrt(1 - t * t), -1.0, 1.0, (-0.5, -0.5), 1e-8,
                                    scheme=scheme)
    assert r.converged and abs(r.value - math.pi) <= 1e-8
    s = 0.1
    r = integrate_endpoint_singular(lambda x: x ** (2 * s - 1), 0.0, 1.0, (2 * s - 1, 0.0), 1e-10,
                                    scheme=scheme)
    assert r.converged and abs(r.value - 5.0) <= 1e-9


def test_endpoint_with_distances_at_nonzero_ends():
    f = lambda x, da, db: da ** -0.5 * db ** -0.5
    r = integrate_endpoint_singular(f, 1.0, 2.0, (-0.5, -0.5), 1e-13, with_distances=True)
    assert r.converged and abs(r.value - math.pi) <= 1e-13
    # exponent close to -1: int_0^1 d^-0.9 e^(1+d) dd = e sum 1 / (k! (k + 0.1))
    exact = math.e * math.fsum(1 / (math.factorial(k) * (k + 0.1)) for k in range(30))
    g = lambda x, da, db: da ** -0.9 * np.exp(x)
    r = integrate_endpoint_singular(g, 1.0, 2.0, (-0.9, 0.0), 1e-12, with_distances=True)
    assert r.converged and abs(r.value - exact) <= 1e-12 * exact


@pytest.mark.parametrize("a", [1.0, 100.0])
def test_endpoint_plain_mode_away_from_zero_is_honest(a):
    # accurate to about 1e-9 here; a tighter request must come back unconverged
    f = lambda x: (x - a) ** -0.5
    r = integrate_endpoint_singular(f, a, a + 1.0, (-0.5, 0.0), 1e-8)
    assert r.converged and abs(r.value - 2.0) <= 1e-8
    r = integrate_endpoint_singular(f, a, a + 1.0, (-0.5, 0.0), 1e-13)
    assert not r.converged
    assert abs(r.value - 2.0) <= 2.0 * r.abs_error_estimate


def test_endpoint_regular_ends_reach_full_precision():
    exact = math.exp(4) - math.exp(3)
    r = integrate_endpoint_singular(np.exp, 3.0, 4.0, (0.0, 0.0), 1e-12)
    assert r.converged and abs(r.value - exact) <= 1e-14 * exact
    # below the 64 eps round-off floor the flag stays down
    assert not integrate_endpoint_singular(np.exp, 3.0, 4.0, (0.0, 0.0), 1e-15).converged


def test_tanh_scheme_resolves_thin_boundary_layer():
    # width-1e-8 layer at the left end: int_0^1 eps / (x + eps)^2 = 1/(1 + eps)
    eps = 1e-8
    f = lambda x, da, db: eps / (da + eps) ** 2
    r = integrate_endpoint_singular(f, 0.0, 1.0, (0.0, 0.0), 1e-12, with_distances=True, scheme="tanh")
    assert r.converged and abs(r.value - 1 / (1 + eps)) <= 1e-11


@pytest.mark.parametrize("exps", [(-1.0, 0.0), (0.0, -1.5)])
def test_endpoint_rejects_non_integrable(exps):
    with pytest.raises(DomainError):
        integrate_endpoint_singular(lambda x: x, 0.0, 1.0, exps, 1e-8)


def test_endpoint_rejects_unknown_scheme():
    with pytest.raises(DomainError):
        integrate_endpoint_singular(lambda x: x, 0.0, 1.0, (0.0, 0.0), 1e-8, scheme="simpson")


def test_endpoint_deterministic():
    f = lambda x: x ** -0.7 * np.cos(x)
    a = integrate_endpoint_singular(f, 0.0, 2.0, (-0.7, 0.0), 1e-11)
    assert a == integrate_endpoint_singular(f, 0.0, 2.0, (-0.7, 0.0), 1e-11)


# --- oscillatory tails ----------------------------------------------------------

def test_oscillatory_sine_over_square():
    # int_pi^inf sin r / r^2 dr = int_pi^inf cos r / r dr = -Ci(pi)
    oracle = -special.sici(math.pi)[1]
    plan = OscillatoryPlan(math.pi * np.arange(1, 40))
    r = integrate_oscillatory_tail(lambda x: np.sin(x) / x ** 2, math.pi, plan, 1e-11)
    assert r.converged and abs(r.value - oracle) <= 1e-9


def test_oscillatory_compact_support_is_degenerate():
    f = lambda x: np.where(x < 2.0, x * (2.0 - x), 0.0)
    plan = OscillatoryPlan(np.arange(3.0, 20.0))
    r = integrate_oscillatory_tail(f, 0.0, plan, 1e-10)
    ref = integrate_adaptive(f, 0.0, 3.0, 1e-12)
    assert r.converged and abs(r.value - ref.value) <= 1e-10
    assert abs(r.value - 4 / 3) <= 1e-10


def test_oscillatory_plan_validation():
    with pytest.raises(DomainError):
        OscillatoryPlan(np.array([1.0]))
    with pytest.raises(DomainError):
        OscillatoryPlan(np.array([1.0, 1.0, 2.0]))
    with pytest.raises(DomainError):
        OscillatoryPlan(np.array([1.0, 2.0, 3.0]), acceleration_order=0)
    with pytest.raises(DomainError):
        integrate_oscillatory_tail(np.sin, 2.0, OscillatoryPlan(np.arange(1.0, 20.0)), 1e-8)


def test_euler_accelerate_alternating_harmonic():
    terms = np.array([(-1.0) ** k / (k + 1) for k in range(30)])
    est, err = euler_accelerate(terms, 8)
    assert abs(est - math.log(2)) <= 1e-9
    assert abs(est - math.log(2)) <= err
    with pytest.raises(DomainError):
        euler_accelerate(terms[:5], 8)


def test_quadresult_addition_and_coercion():
    a = QuadResult(np.float64(1.0), 1e-3, np.int64(5), np.bool_(True))
    assert type(a.value) is float and type(a.evaluations) is int and type(a.converged) is bool
    b = a + QuadResult(2.0, 1e-4, 7, False)
    assert b == QuadResult(3.0, 1.1e-3, 12, False)


def test_adaptive_stops_at_round_off_floor():
    # an unreachable tolerance must come back unconverged without exhausting the panel budget
    r = integrate_adaptive(np.exp, 3.0, 4.0, 1e-18)
    assert not r.converged
    assert r.evaluations < 2000
    assert abs(r.value - (math.exp(4) - math.exp(3))) <= r.abs_error_estimate
