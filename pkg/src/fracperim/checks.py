"""Verification suites behind ``fracperim verify``.

Each check returns a :class:`Check` with the worst measured deviation, the
tolerance it is held to and a pass flag.  ``quick`` shrinks grids and sample
counts; the full settings are the acceptance thresholds.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .closedform import ball_perimeter_closed, ball_perimeter_via_eigenvalue, best_constant
from .errors import DomainError, InfinitePerimeterError
from .fourier_route import assert_divergence_above_half, ball_perimeter_fourier, radial_integral
from .isoperimetry import deficit, limit_sweep_half, limit_sweep_zero, quotient
from .spatial_route import ShapeSpec, ball_perimeter_spatial, mc_perimeter
from .specfun import weber_schafheitlin
from .sweep import SweepConfig, ball_route, run_sweep

__all__ = ["Check", "SUITES", "run_suite"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    expected: str
    tolerance: float
    seconds: float
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _timed(fn):
    def wrapper(quick: bool) -> Check:
        t0 = time.perf_counter()
        name, passed, measured, expected, tol, detail = fn(quick)
        return Check(name, bool(passed), float(measured), expected, float(tol),
                     time.perf_counter() - t0, detail)
    wrapper.__name__ = fn.__name__
    return wrapper


S_GRID = (0.05, 0.1, 0.25, 0.4, 0.45)
N_GRID = (2, 3, 4, 7)


@_timed
def check_eigen(quick):
    dims = range(2, 11)
    ss = [0.05 * k for k in range(1, 10)]
    worst = max(
        abs(ball_perimeter_via_eigenvalue(n, s) / ball_perimeter_closed(n, s) - 1.0)
        for n in dims for s in ss
    )
    return "eigen-chain", worst <= 1e-10, worst, "relative gap to closed form", 1e-10, ""


@_timed
def check_fourier(quick):
    dims, ss = ((2, 3), (0.1, 0.45)) if quick else (N_GRID, S_GRID)
    worst, slowest = 0.0, 0.0
    for n in dims:
        for s in ss:
            t0 = time.perf_counter()
            rep = ball_perimeter_fourier(n, s, 1e-8)
            slowest = max(slowest, time.perf_counter() - t0)
            worst = max(worst, abs(rep.perimeter / ball_perimeter_closed(n, s) - 1.0))
    ok = worst <= 1e-7 and slowest < 5.0
    return "fourier-route", ok, worst, "relative gap to closed form", 1e-7, f"slowest cell {slowest:.2f} s"


@_timed
def check_weber(quick):
    dims, ss = ((2, 3), (0.1, 0.45)) if quick else (N_GRID, S_GRID)
    worst = 0.0
    for n in dims:
        for s in ss:
            num = radial_integral(n, s, 1e-10).value
            ws = weber_schafheitlin(0.5 * n, 0.5 * n, 1.0 - 2.0 * s, 2.0 * math.pi)
            worst = max(worst, abs(num / ws - 1.0))
    return "weber-schafheitlin", worst <= 1e-8, worst, "relative gap to closed form", 1e-8, ""


@_timed
def check_spatial(quick):
    dims, ss = ((2, 3), (0.1, 0.45)) if quick else ((2, 3, 4), S_GRID)
    worst_ratio, worst, slowest = 0.0, 0.0, 0.0
    for n in dims:
        for s in ss:
            tol = 1e-4 if s > 0.4 else 1e-5
            t0 = time.perf_counter()
            p = ball_perimeter_spatial(n, s, 1e-8)
            slowest = max(slowest, time.perf_counter() - t0)
            rel = abs(p / ball_perimeter_closed(n, s) - 1.0)
            worst = max(worst, rel)
            worst_ratio = max(worst_ratio, rel / tol)
    ok = worst_ratio <= 1.0 and slowest < 10.0
    return "spatial-route", ok, worst, "relative gap (1e-5, or 1e-4 at s=0.45)", 1e-5, f"slowest cell {slowest:.2f} s"


@_timed
def check_montecarlo(quick):
    samples = 200_000 if quick else 1_000_000
    reps, rep_samples = (10, 20_000) if quick else (50, 100_000)
    worst_z, worst_rel = 0.0, 0.0
    for s in (0.1, 0.25):
        est = mc_perimeter(ShapeSpec.ball(2), s, samples, 42)
        exact = ball_perimeter_closed(2, s)
        worst_z = max(worst_z, abs(est.value - exact) / est.std_error)
        worst_rel = max(worst_rel, est.std_error / est.value)
    exact = ball_perimeter_closed(2, 0.1)
    inside = sum(
        mc_perimeter(ShapeSpec.ball(2), 0.1, rep_samples, 1000 + i).compatible(exact)
        for i in range(reps)
    )
    coverage = inside / reps
    ok = worst_z <= 3.0 and worst_rel <= 0.01 and coverage >= 0.94
    detail = f"max |z| {worst_z:.2f}, max stderr/value {worst_rel:.2e}, coverage {inside}/{reps}"
    return "montecarlo-unbiased", ok, worst_z, "|estimate - closed| / stderr", 3.0, detail


@_timed
def check_isoperimetric(quick):
    samples = 200_000 if quick else 1_000_000
    cube = deficit(ShapeSpec.cube(2, 2.0), 0.1, samples, 42)
    ann = deficit(ShapeSpec.annulus(2, 0.5, 1.0), 0.1, samples, 42)
    ball = deficit(ShapeSpec.ball(2), 0.1, samples, 42)
    ok = cube.strictly_positive and ann.strictly_positive and ball.compatible_with_zero
    detail = f"z cube {cube.z:.1f}, z annulus {ann.z:.1f}, z ball {ball.z:.2f}"
    return "isoperimetric-deficit", ok, min(cube.z, ann.z), "deficit z-score of non-balls", 3.0, detail


@_timed
def check_scaling(quick):
    samples = 200_000 if quick else 1_000_000
    s = 0.1
    qs = []
    for i, R in enumerate((0.5, 1.0, 2.0)):
        shape = ShapeSpec.ball(2, R)
        est = mc_perimeter(shape, s, samples, 42 + i)
        vol = shape.volume() ** ((2 - 2 * s) / 2)
        qs.append((quotient(est.value, shape.volume(), 2, s), est.std_error / vol))
    worst = max(
        abs(a[0] - b[0]) / math.hypot(a[1], b[1])
        for i, a in enumerate(qs) for b in qs[i + 1:]
    )
    return "scale-invariance", worst <= 3.0, worst, "pairwise quotient gap / combined sigma", 3.0, ""


@_timed
def check_limits(quick):
    worst, worst_forms = 0.0, 0.0
    for n in (2, 3, 5):
        lo, hi = limit_sweep_zero(n), limit_sweep_half(n)
        worst = max(worst, lo.relative_error, hi.relative_error)
        worst_forms = max(worst_forms, abs(hi.comparison / hi.target - 1.0))
    ok = worst <= 1e-3 and worst_forms <= 1e-12
    return "endpoint-limits", ok, worst, "relative extrapolation error", 1e-3, f"limit forms differ by {worst_forms:.1e}"


@_timed
def check_divergence(quick):
    refused = 0
    attempts = [
        lambda s: best_constant(2, s),
        lambda s: ball_perimeter_closed(2, s),
        lambda s: ball_perimeter_via_eigenvalue(2, s),
        lambda s: ball_perimeter_fourier(2, s),
        lambda s: ball_perimeter_spatial(2, s),
        lambda s: mc_perimeter(ShapeSpec.ball(2), s, 1000, 1),
    ]
    for f in attempts:
        for s in (0.5, 0.75):
            try:
                f(s)
            except InfinitePerimeterError:
                refused += 1
    total = 2 * len(attempts)
    partial = assert_divergence_above_half(2, 0.5)
    steps = np.diff(partial)
    # logarithmic growth: equal increments per decade, no decay
    growing = bool(np.all(steps > 0) and steps[-1] >= 0.5 * steps[0])
    ok = refused == total and growing
    detail = f"refused {refused}/{total}; partial integrals {np.array2string(partial, precision=4)}"
    return "divergence-guard", ok, refused, "routes refusing s >= 1/2", total, detail


@_timed
def check_determinism(quick):
    cfg = SweepConfig(dims=(2, 3), s_values=(0.1, 0.3), routes=("closed", "eigen", "fourier"))
    key = ("dim", "s", "route", "value", "err")
    a, _ = run_sweep(cfg, workers=1)
    b, _ = run_sweep(cfg, workers=4)
    c, _ = run_sweep(cfg, workers=1)
    same = [tuple(r[k] for k in key) for r in a] == [tuple(r[k] for k in key) for r in b] \
        == [tuple(r[k] for k in key) for r in c]
    m1 = ball_route("montecarlo", 2, 0.1, samples=150_000, seed=7, workers=1)
    m2 = ball_route("montecarlo", 2, 0.1, samples=150_000, seed=7, workers=3)
    same_mc = (m1.value, m1.err) == (m2.value, m2.err)
    ok = same and same_mc
    return "determinism", ok, float(ok), "bit-identical reruns", 1.0, f"sweep {same}, montecarlo {same_mc}"


SUITES = {
    "routes": (check_eigen, check_fourier, check_spatial),
    "weber": (check_weber,),
    "limits": (check_limits, check_divergence),
    "isoperimetric": (check_montecarlo, check_isoperimetric, check_scaling),
}
SUITES["all"] = (
    SUITES["routes"] + SUITES["weber"] + SUITES["isoperimetric"] + SUITES["limits"] + (check_determinism,)
)


def run_suite(name: str, quick: bool = False) -> list[Check]:
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return [check(quick) for check in SUITES[name]]
