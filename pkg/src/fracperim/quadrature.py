"""One-dimensional integration engines.

Three engines share the :class:`QuadResult` return type:

* :func:`integrate_adaptive` -- globally adaptive Gauss-Kronrod (G10/K21)
  paneling with a priority queue ordered by panel error.
* :func:`integrate_endpoint_singular` -- tanh-sinh (double exponential)
  quadrature for integrable algebraic endpoint singularities.
* :func:`integrate_oscillatory_tail` -- semi-infinite integrals of
  sign-alternating integrands: panel sums between partition points followed
  by Euler-type acceleration of the partial sums.

Integrands are vectorised: they receive a 1-D float array and must return an
array of the same shape.  They must also be pure; the engines are
deterministic for fixed inputs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import legendre as _leg

from .errors import DomainError

__all__ = [
    "QuadResult",
    "OscillatoryPlan",
    "gauss_kronrod_rule",
    "integrate_adaptive",
    "integrate_endpoint_singular",
    "integrate_oscillatory_tail",
    "euler_accelerate",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    """Value of an integral with an absolute error estimate.

    ``converged`` is only set when ``abs_error_estimate`` is within the
    tolerance that was requested.
    """

    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "abs_error_estimate", float(self.abs_error_estimate))
        object.__setattr__(self, "evaluations", int(self.evaluations))
        object.__setattr__(self, "converged", bool(self.converged))

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.abs_error_estimate + other.abs_error_estimate,
            self.evaluations + other.evaluations,
            self.converged and other.converged,
        )


@dataclass(frozen=True)
class OscillatoryPlan:
    """Partition points for a semi-infinite oscillatory integral.

    The panels between consecutive points should carry integrals of
    alternating sign and (eventually) decreasing magnitude.
    """

    partition_points: np.ndarray
    acceleration_order: int = 8

    def __post_init__(self):
        pts = np.asarray(self.partition_points, dtype=float)
        if pts.ndim != 1 or len(pts) < 2:
            raise DomainError("an oscillatory plan needs at least two partition points")
        if np.any(np.diff(pts) <= 0.0):
            raise DomainError("partition points must be strictly increasing")
        if int(self.acceleration_order) != self.acceleration_order or self.acceleration_order < 1:
            raise DomainError("acceleration_order must be a positive integer")
        object.__setattr__(self, "partition_points", pts)


# ---------------------------------------------------------------------------
# Gauss-Kronrod rule
# ---------------------------------------------------------------------------

def gauss_kronrod_rule(n: int = 10):
    """Nodes and weights of the (n, 2n+1) Gauss-Kronrod pair on [-1, 1].

    The n+1 Kronrod nodes are the roots of the Stieltjes polynomial E_{n+1},
    fixed by orthogonality of P_n E_{n+1} against all polynomials of degree
    <= n; the 2n+1 weights then follow from the Legendre moment equations.

    Returns ``(x, w_kronrod, w_gauss)`` with ``w_gauss`` zero on the Kronrod
    nodes.
    """
    xg, wg = _leg.leggauss(n)
    xq, wq = _leg.leggauss(3 * n + 4)
    basis = np.eye(n + 2)
    p = np.array([_leg.legval(xq, basis[j]) for j in range(n + 2)])
    lhs = np.array([[np.sum(wq * p[n] * p[j] * p[k]) for j in range(n + 1)] for k in range(n + 1)])
    rhs = -np.array([np.sum(wq * p[n] * p[n + 1] * p[k]) for k in range(n + 1)])
    coef = np.append(np.linalg.solve(lhs, rhs), 1.0)
    xk = np.sort(_leg.legroots(coef).real)
    x = np.sort(np.concatenate([xg, xk]))
    # exact symmetry
    x = 0.5 * (x - x[::-1])
    m = 2 * n + 1
    vand = np.array([_leg.legval(x, np.eye(m)[j]) for j in range(m)])
    moments = np.zeros(m)
    moments[0] = 2.0
    wk = np.linalg.solve(vand, moments)
    wk = 0.5 * (wk + wk[::-1])
    w_gauss = np.zeros(m)
    w_gauss[1::2] = wg
    return x, wk, w_gauss


_GK_X, _GK_WK, _GK_WG = gauss_kronrod_rule(10)


def _gk_panels(f, lo: np.ndarray, hi: np.ndarray):
    """Apply G10/K21 to several panels with one integrand call."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    x = c[:, None] + h[:, None] * _GK_X[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise FloatingPointError("integrand returned a non-finite value")
    k = h * (fx @ _GK_WK)
    g = h * (fx @ _GK_WG)
    mean = k / np.where(h > 0, 2.0 * h, 1.0)
    resabs = np.abs(h) * (np.abs(fx) @ _GK_WK)
    resasc = np.abs(h) * (np.abs(fx - mean[:, None]) @ _GK_WK)
    diff = np.abs(k - g)
    # QUADPACK error heuristic with a round-off floor
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(resasc > 0, resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5), diff)
    floor = 50.0 * _EPS * resabs
    return k, np.maximum(scaled, floor), floor


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float,
    *,
    max_panels: int = 4000,
) -> QuadResult:
    """Globally adaptive G10/K21 quadrature of ``f`` over ``[a, b]``.

    The panel with the largest error estimate is bisected until the summed
    error estimate drops below the absolute tolerance ``tol``.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"need finite a < b, got [{a}, {b}]")
    if not tol > 0:
        raise DomainError("tol must be positive")
    k, err, floor = _gk_panels(f, np.array([a]), np.array([b]))
    evals = 21
    # heap entries: (-error, insertion counter, lo, hi, value, error, round-off floor)
    heap = [(-err[0], 0, a, b, k[0], err[0], floor[0])]
    counter = 1
    total_err = err[0]
    # panels at double-precision resolution or at their round-off floor;
    # bisecting them cannot lower the error
    retired = []
    while total_err > tol and heap and len(heap) + len(retired) < max_panels:
        item = heapq.heappop(heap)
        lo, hi = item[2], item[3]
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or item[5] <= item[6]:
            retired.append(item)
            continue
        kk, ee, ff = _gk_panels(f, np.array([lo, mid]), np.array([mid, hi]))
        evals += 42
        for j, (l_, h_) in enumerate(((lo, mid), (mid, hi))):
            heapq.heappush(heap, (-ee[j], counter, l_, h_, kk[j], ee[j], ff[j]))
            counter += 1
        total_err += ee[0] + ee[1] - item[5]
    heap += retired
    # sum in a fixed (positional) order for bit-reproducibility
    ordered = sorted(heap, key=lambda item: item[2])
    value = math.fsum(item[4] for item in ordered)
    total_err = math.fsum(item[5] for item in ordered)
    return QuadResult(value, total_err, evals, total_err <= tol)


# ---------------------------------------------------------------------------
# tanh-sinh
# ---------------------------------------------------------------------------

def _ts_nodes(t: np.ndarray, half: float):
    """Distance to the nearer endpoint and weight (without the step)."""
    u = 0.5 * math.pi * np.sinh(np.abs(t))
    with np.errstate(over="ignore", under="ignore"):
        e2 = np.exp(-2.0 * u)
        dist = half * 2.0 * e2 / (1.0 + e2)
        # dx/dt = half * (pi/2) cosh t / cosh(u)^2 = half * (pi/2) cosh t * 4 e2 / (1 + e2)^2
        w = half * 0.5 * math.pi * np.cosh(t) * 4.0 * e2 / (1.0 + e2) ** 2
    return dist, w


def _tanh_nodes(t: np.ndarray, half: float):
    """Same for the plain tanh map x = mid + half * tanh(t / 2)."""
    with np.errstate(over="ignore", under="ignore"):
        e = np.exp(-np.abs(t))
        dist = half * 2.0 * e / (1.0 + e)
        w = half * 2.0 * e / (1.0 + e) ** 2
    return dist, w


_SCHEMES = {"tanh-sinh": _ts_nodes, "tanh": _tanh_nodes}


def integrate_endpoint_singular(
    f: Callable,
    a: float,
    b: float,
    sing_exponents: tuple[float, float],
    tol: float,
    *,
    with_distances: bool = False,
    min_distance: float | None = None,
    max_level: int = 10,
    scheme: str = "tanh-sinh",
) -> QuadResult:
    """Integrate over ``[a, b]`` with algebraic singularities at the ends.

    ``sing_exponents = (p, q)`` declares ``f(x) ~ (x - a)^p`` near ``a`` and
    ``f(x) ~ (b - x)^q`` near ``b``; both must exceed -1.  A tanh-sinh
    substitution clusters nodes double-exponentially at both ends, and the
    step is halved until successive estimates agree to ``tol``.

    With ``with_distances=True`` the integrand is called as
    ``f(x, x - a, b - x)`` with both distances computed without cancellation,
    which lets it resolve singularities at non-zero endpoints to full
    precision.  Otherwise, at an end with a negative exponent, nodes closer
    than its floating-point resolution are dropped and the missing sliver is
    restored from the declared exponent; that caps the accuracy near 1e-9
    relative for singular ends away from zero, and the result then reports
    non-convergence for tighter tolerances.  ``min_distance`` imposes that
    cut-off explicitly, for integrands that cannot be evaluated arbitrarily
    close to the ends.

    ``scheme="tanh"`` uses the single-exponential map instead, whose nodes are
    evenly spaced in log-distance to the ends.  It is the better choice when
    the integrand has a boundary layer of unknown, possibly tiny, width.
    """
    if scheme not in _SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}")
    nodes = _SCHEMES[scheme]
    p, q = (float(e) for e in sing_exponents)
    if p <= -1.0 or q <= -1.0:
        raise DomainError(f"singular exponents must exceed -1, got {sing_exponents}")
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"need finite a < b, got [{a}, {b}]")
    if not tol > 0:
        raise DomainError("tol must be positive")
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    tiny = 1e-280 * max(1.0, half)
    if with_distances:
        cut_a = cut_b = tiny
    else:
        # a regular end can be approached until x rounds onto it
        cut_a = tiny if p >= 0 else max(tiny, 1e6 * _EPS * abs(a))
        cut_b = tiny if q >= 0 else max(tiny, 1e6 * _EPS * abs(b))
    if min_distance is not None:
        cut_a = max(cut_a, float(min_distance))
        cut_b = max(cut_b, float(min_distance))

    def evaluate(t: np.ndarray):
        dist, w = nodes(t, half)
        left = t < 0
        keep = np.where(left, dist >= cut_a, dist >= cut_b) & (w > 0)
        t, dist, w, left = t[keep], dist[keep], w[keep], left[keep]
        x = np.where(left, a + dist, b - dist)
        x = np.where(t == 0, mid, x)
        if with_distances:
            da = np.where(left, dist, (b - a) - dist)
            db = np.where(left, (b - a) - dist, dist)
            da = np.where(t == 0, half, da)
            db = np.where(t == 0, half, db)
            fx = np.asarray(f(x, da, db), dtype=float)
        else:
            fx = np.asarray(f(x), dtype=float)
        if not np.all(np.isfinite(fx)):
            raise FloatingPointError("integrand returned a non-finite value")
        return t, dist, w, fx

    # truncate t where the nodes reach the cut-off distance
    log_span = math.log(2.0 * half / min(cut_a, cut_b))
    t_max = (math.asinh(log_span / math.pi) + 0.5) if scheme == "tanh-sinh" else log_span + 1.0
    step = 1.0
    t0 = np.arange(-math.floor(t_max), math.floor(t_max) + 1.0)
    t, dist, w, fx = evaluate(t0)
    nodes_t, nodes_d, nodes_w, nodes_f = [t], [dist], [w], [fx]
    evals = len(t)

    def tail_correction(h: float) -> float:
        tt = np.concatenate(nodes_t)
        dd = np.concatenate(nodes_d)
        ff = np.concatenate(nodes_f)
        corr = 0.0
        for side, expo in ((tt < 0, p), (tt > 0, q)):
            if not np.any(side):
                continue
            i = np.argmin(np.where(side, dd, np.inf))
            d_c = dd[i]
            # nodes beyond t_c + h/2 are missing; f ~ C d^expo there
            d_star, _ = nodes(np.array([abs(tt[i]) + 0.5 * h]), half)
            if d_star[0] == 0.0 or ff[i] == 0.0:
                continue
            corr += ff[i] * (d_star[0] / d_c) ** expo * d_star[0] / (1.0 + expo)
        return corr

    def current(h: float) -> float:
        ww = np.concatenate(nodes_w)
        ff = np.concatenate(nodes_f)
        tt = np.concatenate(nodes_t)
        order = np.argsort(tt, kind="stable")
        return h * math.fsum((ww * ff)[order]) + tail_correction(h)

    prev = current(step)
    err = math.inf
    for level in range(1, max_level + 1):
        step *= 0.5
        k_max = math.floor(t_max / step)
        tn = np.arange(-k_max, k_max + 1)
        tn = tn[tn % 2 != 0] * step
        t, dist, w, fx = evaluate(tn)
        nodes_t.append(t)
        nodes_d.append(dist)
        nodes_w.append(w)
        nodes_f.append(fx)
        evals += len(t)
        val = current(step)
        scale = math.fsum(np.abs(np.concatenate(nodes_w) * np.concatenate(nodes_f))) * step
        err = abs(val - prev) + 64.0 * _EPS * scale
        prev = val
        if level >= 3 and err <= tol:
            return QuadResult(val, err, evals, True)
    return QuadResult(prev, err, evals, err <= tol)


# ---------------------------------------------------------------------------
# Oscillatory tails
# ---------------------------------------------------------------------------

def euler_accelerate(terms: np.ndarray, order: int) -> tuple[float, float]:
    """Sum a sign-alternating series by iterated averaging of partial sums.

    Averaging neighbouring partial sums ``order`` times is the Euler-Knopp
    transform applied to the tail.  Returns ``(estimate, error_estimate)``;
    the error is the change produced by the last averaging sweep at the end
    of the table plus the spread between the two final estimates.
    """
    terms = np.asarray(terms, dtype=float)
    if len(terms) < order + 2:
        raise DomainError(f"need at least order + 2 = {order + 2} terms, got {len(terms)}")
    sums = np.cumsum(terms)
    prev_row = sums
    row = sums
    for _ in range(order):
        prev_row = row
        row = 0.5 * (row[:-1] + row[1:])
    estimate = row[-1]
    err = abs(row[-1] - prev_row[-1]) + abs(row[-1] - row[-2])
    return float(estimate), float(err)


def integrate_oscillatory_tail(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    plan: OscillatoryPlan,
    tol: float,
) -> QuadResult:
    """Integrate ``f`` over ``[a, inf)`` by panels and series acceleration.

    The integrand is integrated exactly (to ``tol`` / number of panels) on
    ``[a, x_0]`` and between consecutive partition points ``x_k``; the panel
    sums are then fed to :func:`euler_accelerate`.
    """
    pts = plan.partition_points
    if pts[0] < a:
        raise DomainError("first partition point lies before the integration start")
    if not tol > 0:
        raise DomainError("tol must be positive")
    edges = pts if pts[0] == a else np.concatenate([[a], pts])
    npan = len(edges) - 1
    panel_tol = 0.1 * tol / npan
    values = np.empty(npan)
    err = 0.0
    evals = 0
    ok = True
    for i in range(npan):
        r = integrate_adaptive(f, edges[i], edges[i + 1], panel_tol)
        values[i] = r.value
        err += r.abs_error_estimate
        evals += r.evaluations
        ok &= r.converged
    head = 0 if pts[0] == a else 1
    order = plan.acceleration_order
    tail = values[head:]
    if np.all(tail == 0.0):
        est, acc_err = 0.0, 0.0
    else:
        est, acc_err = euler_accelerate(tail, order)
    value = math.fsum(values[:head]) + est
    total_err = err + acc_err
    return QuadResult(value, total_err, evals, ok and total_err <= tol)
