"""Ball-perimeter sweeps over (dimension, order, route) with CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .closedform import ball_perimeter_closed, ball_perimeter_via_eigenvalue
from .errors import DomainError, check_dim, check_s
from .fourier_route import ball_perimeter_fourier
from .spatial_route import ShapeSpec, frank_seiringer_C, mc_perimeter, worker_count
from .specfun import ball_volume, gamma

__all__ = [
    "ROUTES",
    "COLUMNS",
    "SweepConfig",
    "RouteResult",
    "ball_route",
    "run_sweep",
    "rows_to_csv",
    "rows_to_json",
]

ROUTES = ("closed", "fourier", "spatial", "eigen", "montecarlo")
COLUMNS = ("dim", "s", "route", "value", "err", "seconds")


@dataclass(frozen=True)
class SweepConfig:
    dims: tuple
    s_values: tuple
    routes: tuple = ("closed",)
    samples: int = 1_000_000
    seed: int = 42
    tol: float = 1e-8
    format: str = "csv"

    def __post_init__(self):
        if not self.dims or not self.s_values or not self.routes:
            raise DomainError("dims, s values and routes must be non-empty")
        object.__setattr__(self, "dims", tuple(check_dim(n) for n in self.dims))
        object.__setattr__(self, "s_values", tuple(check_s(s) for s in self.s_values))
        bad = [r for r in self.routes if r not in ROUTES]
        if bad:
            raise DomainError(f"unknown route(s) {bad}; choose from {ROUTES}")
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format!r}")
        if int(self.samples) != self.samples or self.samples < 2:
            raise DomainError("samples must be an integer >= 2")
        if int(self.seed) != self.seed or self.seed < 0:
            raise DomainError("seed must be a non-negative integer")


@dataclass(frozen=True)
class RouteResult:
    route: str
    value: float
    err: float
    seconds: float
    converged: bool = True
    detail: object = None


def ball_route(
    route: str,
    n: int,
    s: float,
    *,
    radius: float = 1.0,
    tol: float = 1e-8,
    samples: int = 1_000_000,
    seed: int = 42,
    workers: int | None = None,
) -> RouteResult:
    """P_s(B_R) by one route; ``err`` is the route's own error metric.

    Deterministic routes give the unit-ball value scaled by R^(N-2s).
    """
    n, s = check_dim(n), check_s(s)
    t0 = time.perf_counter()
    scale = radius ** (n - 2.0 * s)
    converged, detail = True, None
    if route == "closed":
        value, err = ball_perimeter_closed(n, s), 0.0
    elif route == "eigen":
        value, err = ball_perimeter_via_eigenvalue(n, s), 0.0
    elif route == "fourier":
        rep = ball_perimeter_fourier(n, s, tol)
        value, err, converged, detail = rep.perimeter, rep.perimeter_error, rep.converged, rep.radial_integral
    elif route == "spatial":
        res = frank_seiringer_C(n, s, tol)
        factor = (
            n * math.pi ** s / ((n - 2.0 * s) * gamma(0.5 * n + 1.0) ** (2.0 * s / n))
            * ball_volume(n) ** ((n - 2.0 * s) / n)
        )
        value, err, converged, detail = factor * res.value, factor * res.abs_error_estimate, res.converged, res
    elif route == "montecarlo":
        est = mc_perimeter(ShapeSpec.ball(n, radius), s, samples, seed, workers)
        return RouteResult(route, est.value, est.std_error, time.perf_counter() - t0, True, est)
    else:
        raise DomainError(f"unknown route {route!r}; choose from {ROUTES}")
    return RouteResult(route, scale * value, scale * err, time.perf_counter() - t0, converged, detail)


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> tuple[list[dict], bool]:
    """Rows in cartesian order dims x s_values x routes, and whether all converged.

    Cells may run concurrently; Monte Carlo cells are themselves
    deterministic for any worker count, so rows never depend on scheduling.
    """
    cells = [(n, s, r) for n in cfg.dims for s in cfg.s_values for r in cfg.routes]
    nw = min(worker_count(workers), len(cells))

    def run(cell):
        n, s, r = cell
        return ball_route(r, n, s, tol=cfg.tol, samples=cfg.samples, seed=cfg.seed, workers=1)

    if nw > 1:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            results = list(pool.map(run, cells))
    else:
        results = [run(c) for c in cells]
    rows = [
        {"dim": n, "s": s, "route": r, "value": res.value, "err": res.err, "seconds": res.seconds}
        for (n, s, r), res in zip(cells, results)
    ]
    return rows, all(res.converged for res in results)


def _cell(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([_cell(row[c]) for c in COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps([{c: row[c] for c in COLUMNS} for row in rows], indent=1) + "\n"
