"""Isoperimetric quotients, deficits and the two endpoint limits in s."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closedform import ball_perimeter_closed, best_constant, davila_limit, limit_s_to_half, limit_s_to_zero
from .errors import DomainError, check_dim, check_s
from .spatial_route import ShapeSpec, mc_perimeter

__all__ = [
    "SIGNIFICANCE",
    "quotient",
    "QuotientReport",
    "deficit",
    "LimitSweep",
    "limit_sweep_zero",
    "limit_sweep_half",
]

SIGNIFICANCE = 3.0

DEFAULT_GRID_ZERO = (1e-3, 2e-3, 4e-3)
DEFAULT_GRID_HALF = (0.499, 0.498, 0.496)


def quotient(perimeter: float, volume: float, n: int, s: float) -> float:
    """P / |E|^((N-2s)/N), invariant under dilations."""
    n, s = check_dim(n), check_s(s)
    if not (perimeter > 0 and volume > 0):
        raise DomainError(f"perimeter and volume must be positive, got {perimeter}, {volume}")
    return perimeter / volume ** ((n - 2.0 * s) / n)


@dataclass(frozen=True)
class QuotientReport:
    """Quotient of one shape against the ball's best constant.

    ``std_error`` is zero for deterministic perimeters.  The verdict compares
    the deficit with its standard error: beyond 3 sigma it is ``"positive"``
    (or ``"negative"``, which would contradict the inequality), within
    1 sigma ``"zero"``, and in between ``"inconclusive"``.
    """

    shape: ShapeSpec
    s: float
    perimeter: float
    std_error: float
    volume: float
    quotient: float
    quotient_error: float
    best: float
    deficit: float

    @property
    def z(self) -> float:
        if self.quotient_error == 0.0:
            return math.copysign(math.inf, self.deficit) if self.deficit else 0.0
        return self.deficit / self.quotient_error

    @property
    def verdict(self) -> str:
        z = self.z
        if z > SIGNIFICANCE:
            return "positive"
        if z < -SIGNIFICANCE:
            return "negative"
        if abs(z) <= 1.0:
            return "zero"
        return "inconclusive"

    @property
    def compatible_with_zero(self) -> bool:
        return abs(self.deficit) <= SIGNIFICANCE * self.quotient_error

    @property
    def strictly_positive(self) -> bool:
        return self.z > SIGNIFICANCE


def deficit(
    shape: ShapeSpec,
    s: float,
    samples: int = 1_000_000,
    seed: int = 42,
    workers: int | None = None,
) -> QuotientReport:
    """Quotient minus best_constant, with the perimeter from Monte Carlo."""
    s = check_s(s)
    est = mc_perimeter(shape, s, samples, seed, workers)
    vol = shape.volume()
    q = quotient(est.value, vol, shape.dim, s)
    q_err = est.std_error / vol ** ((shape.dim - 2.0 * s) / shape.dim)
    best = best_constant(shape.dim, s)
    return QuotientReport(
        shape=shape,
        s=s,
        perimeter=est.value,
        std_error=est.std_error,
        volume=vol,
        quotient=q,
        quotient_error=q_err,
        best=best,
        deficit=q - best,
    )


@dataclass(frozen=True)
class LimitSweep:
    """Rows (s, value) and an OLS linear extrapolation to the endpoint.

    ``extrapolated`` is None when the grid has a single point.  The fit is a
    diagnostic, not an error-bounded method.
    """

    n: int
    endpoint: float
    rows: list
    extrapolated: float | None
    target: float
    comparison: float | None = None
    fit: tuple = field(default=())

    @property
    def relative_error(self) -> float | None:
        if self.extrapolated is None:
            return None
        return abs(self.extrapolated - self.target) / abs(self.target)


def _extrapolate(x: np.ndarray, y: np.ndarray):
    """Intercept of the least-squares line through (x, y)."""
    if len(x) < 2:
        return None, ()
    slope, intercept = np.polyfit(x, y, 1)
    return float(intercept), (float(intercept), float(slope))


def _grid(s_grid) -> list[float]:
    grid = [check_s(v) for v in s_grid]
    if not grid:
        raise DomainError("s grid is empty")
    return grid


def limit_sweep_zero(n: int, s_grid=DEFAULT_GRID_ZERO) -> LimitSweep:
    """s * best_constant(N, s) as s -> 0, extrapolated against sigma_{N-1}."""
    n = check_dim(n)
    grid = _grid(s_grid)
    rows = [(s, s * best_constant(n, s)) for s in grid]
    x = np.array(grid)
    y = np.array([v for _, v in rows])
    ext, fit = _extrapolate(x, y)
    return LimitSweep(n, 0.0, rows, ext, limit_s_to_zero(n), None, fit)


def limit_sweep_half(n: int, s_grid=DEFAULT_GRID_HALF) -> LimitSweep:
    """(1 - 2s) P_s(B_1) as s -> 1/2, extrapolated in 1/2 - s.

    The target is the Gamma-form limit; ``comparison`` is the same limit
    written as the angular projection constant times the perimeter of B_1.
    """
    n = check_dim(n)
    grid = _grid(s_grid)
    rows = [(s, (1.0 - 2.0 * s) * ball_perimeter_closed(n, s)) for s in grid]
    x = 0.5 - np.array(grid)
    y = np.array([v for _, v in rows])
    ext, fit = _extrapolate(x, y)
    return LimitSweep(n, 0.5, rows, ext, limit_s_to_half(n), davila_limit(n), fit)
