"""Real-space routes to the s-perimeter.

Two independent computations live here:

* the double integral C_{N,s,1} of the spherical-coordinates reduction of the
  seminorm of 1_{B_1}, giving the ball perimeter by nested 1D quadrature;
* a Monte Carlo estimator of P_s(E) = 2 int_E int_{E^c} |x-y|^(-N-2s) dy dx
  for general shapes.

Monte Carlo design
------------------
For x in E at distance d from the complement, the ball B(x, d) lies in E, so

    int_{E^c} |x-y|^(-N-2s) dy = sigma_{N-1} d^(-2s) / (2s) * P[x + r w in E^c],

with w uniform on the sphere and r Pareto distributed on (d, inf) with
density 2s d^(2s) r^(-1-2s).  Sampling x with density d(x)^(-2s) / Z_E then
gives P_s(E) = Z_E sigma_{N-1} / s * P[exit], so every per-sample weight is
either 0 or Z_E sigma_{N-1} / s.  The identity holds for any lower bound of d,
which keeps the estimator unbiased when the distance is only bounded below.

Ball and cube interior points are drawn exactly (their distance level sets
are spheres and cube surfaces); the annulus normaliser comes from 1D
quadrature and its radii from rejection sampling.  The ellipsoid is the image
of the unit ball under A = diag(axes): points are drawn from the ball density
and mapped, and the weight carries the bounded ratio (d / delta)^(-2s), with
delta the unit-ball distance of the preimage.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, check_dim, check_s
from .quadrature import QuadResult, integrate_endpoint_singular
from .specfun import _gamma_product, ball_volume, gamma, sphere_area

__all__ = [
    "ShapeSpec",
    "McEstimate",
    "fs_inner",
    "frank_seiringer_C",
    "ball_perimeter_spatial",
    "shape_distance",
    "mc_perimeter",
    "mc_normalizer",
    "worker_count",
]

BLOCK = 1 << 16
_EPS_F = float(np.finfo(float).eps)
_KINDS = ("ball", "cube", "ellipsoid", "annulus")


# ---------------------------------------------------------------------------
# Frank-Seiringer double integral
# ---------------------------------------------------------------------------

def _inner_scaled(n: int, s: float, r: float, u: float, tol: float) -> QuadResult:
    """u^(3+2s) * int_{-1}^{1} (1-t^2)^((N-3)/2) (u^2 + 2r(1-t))^(-(N+2s)/2) dt, u = 1 - r.

    The rescaled integrand is O(1) across the boundary layer 1 - t ~ u^2,
    which the tanh map resolves at every scale.
    """
    alpha = 0.5 * (n + 2.0 * s)
    beta = 0.5 * (n - 3.0)
    lu2 = 2.0 * math.log(u)
    c = 2.0 * r / (u * u)

    def g(t, da, db):
        return np.exp(beta * (np.log(da * db) - lu2) - alpha * np.log1p(c * db))

    return integrate_endpoint_singular(
        g, -1.0, 1.0, (beta, beta), tol, with_distances=True,
        min_distance=max(1e-300, 1e-20 * u * u), scheme="tanh", max_level=8,
    )


def fs_inner(n: int, s: float, r: float, tol: float = 1e-12) -> float:
    """int_{-1}^{1} (1-t^2)^((N-3)/2) (1 - 2rt + r^2)^(-(N+2s)/2) dt for 0 <= r < 1."""
    n, s = check_dim(n), check_s(s)
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"need 0 <= r < 1, got {r}")
    u = 1.0 - r
    res = _inner_scaled(n, s, r, u, tol * u * u)
    return res.value * u ** (-3.0 - 2.0 * s)


def frank_seiringer_C(n: int, s: float, tol: float = 1e-10) -> QuadResult:
    """C_{N,s,1} = 2 sigma_{N-2} int_0^1 r^(2s-1) (1 - r^(N-2s)) Phi(r) dr.

    Phi is the inner angular integral of :func:`fs_inner` and sigma_{N-2} the
    measure of the unit (N-2)-sphere, with sigma_0 = 2.  ``tol`` is relative.
    Near r = 1 the integrand behaves like (1-r)^(-2s); near r = 0 like r^(2s-1).
    """
    n, s = check_dim(n), check_s(s, numerical=True)
    if not tol > 0:
        raise DomainError("tol must be positive")
    failures = [0]

    def run(rel_tol: float, abs_tol: float) -> QuadResult:
        def outer(r, da, db):
            u = db
            phi = np.empty_like(r)
            for i, (ri, ui) in enumerate(zip(r, u)):
                res = _inner_scaled(n, s, ri, ui, rel_tol * ui * ui)
                failures[0] += not res.converged
                phi[i] = res.value
            expo = n - 2.0 * s
            with np.errstate(divide="ignore"):
                one_minus = np.where(r < 0.5, -np.expm1(expo * np.log(r)), -np.expm1(expo * np.log1p(-u)))
            return r ** (2.0 * s - 1.0) * (one_minus / u) * u ** (-2.0 * s) * (phi / (u * u))

        return integrate_endpoint_singular(
            outer, 0.0, 1.0, (2.0 * s - 1.0, -2.0 * s), abs_tol,
            with_distances=True, min_distance=1e-140,
        )

    rough = run(1e-4, 1e-4)
    failures[0] = 0
    res = run(1e-2 * tol, tol * abs(rough.value))
    factor = 2.0 * sphere_area(n - 1)
    return QuadResult(
        factor * res.value,
        factor * res.abs_error_estimate,
        rough.evaluations + res.evaluations,
        res.converged and failures[0] == 0,
    )


def ball_perimeter_spatial(n: int, s: float, tol: float = 1e-10) -> float:
    """P_s(B_1) = N pi^s / [(N-2s) Gamma(N/2+1)^(2s/N)] * C_{N,s,1} * omega_N^((N-2s)/N).

    Raises ConvergenceError (with the partial QuadResult) if the quadrature
    does not reach ``tol``.
    """
    n, s = check_dim(n), check_s(s, numerical=True)
    res = frank_seiringer_C(n, s, tol)
    factor = n * math.pi ** s / ((n - 2.0 * s) * gamma(0.5 * n + 1.0) ** (2.0 * s / n))
    if not res.converged:
        raise ConvergenceError(f"spatial route did not converge for N={n}, s={s:g}", res)
    return factor * res.value * ball_volume(n) ** ((n - 2.0 * s) / n)


# ---------------------------------------------------------------------------
# Shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShapeSpec:
    """Ball, axis-aligned cube or ellipsoid, or annulus, centred at the origin.

    ``size`` holds (R,) for a ball, (side,) for a cube, the semi-axes for an
    ellipsoid and (r0, r1) for an annulus.
    """

    kind: str
    dim: int
    size: tuple

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown shape kind {self.kind!r}; expected one of {_KINDS}")
        object.__setattr__(self, "dim", check_dim(self.dim))
        size = tuple(float(v) for v in np.atleast_1d(self.size))
        object.__setattr__(self, "size", size)
        if not all(math.isfinite(v) and v > 0 for v in size):
            raise DomainError(f"shape sizes must be positive and finite, got {size}")
        expected = {"ball": 1, "cube": 1, "ellipsoid": self.dim, "annulus": 2}[self.kind]
        if len(size) != expected:
            raise DomainError(f"{self.kind} in dimension {self.dim} needs {expected} size parameters")
        if self.kind == "annulus" and not size[0] < size[1]:
            raise DomainError(f"annulus needs r0 < r1, got {size}")

    @classmethod
    def ball(cls, dim: int, radius: float = 1.0) -> "ShapeSpec":
        return cls("ball", dim, (radius,))

    @classmethod
    def cube(cls, dim: int, side: float = 2.0) -> "ShapeSpec":
        return cls("cube", dim, (side,))

    @classmethod
    def ellipsoid(cls, axes) -> "ShapeSpec":
        axes = tuple(np.atleast_1d(np.asarray(axes, dtype=float)))
        return cls("ellipsoid", len(axes), axes)

    @classmethod
    def annulus(cls, dim: int, r0: float, r1: float) -> "ShapeSpec":
        return cls("annulus", dim, (r0, r1))

    def volume(self) -> float:
        n = self.dim
        if self.kind == "ball":
            return ball_volume(n) * self.size[0] ** n
        if self.kind == "cube":
            return self.size[0] ** n
        if self.kind == "ellipsoid":
            return ball_volume(n) * math.prod(self.size)
        r0, r1 = self.size
        return ball_volume(n) * (r1 ** n - r0 ** n)

    def outer_radius(self) -> float:
        """Radius of a centred ball containing the shape."""
        if self.kind == "cube":
            return 0.5 * self.size[0] * math.sqrt(self.dim)
        return max(self.size)

    def _points(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DomainError(f"points must have last axis {self.dim}, got shape {x.shape}")
        return x

    def contains(self, x) -> np.ndarray:
        """Membership of the closed shape; non-finite points are outside."""
        x = self._points(x)
        with np.errstate(invalid="ignore", over="ignore"):
            if self.kind == "ball":
                inside = np.sum(x * x, axis=-1) <= self.size[0] ** 2
            elif self.kind == "cube":
                inside = np.max(np.abs(x), axis=-1) <= 0.5 * self.size[0]
            elif self.kind == "ellipsoid":
                inside = np.sum((x / np.asarray(self.size)) ** 2, axis=-1) <= 1.0
            else:
                rr = np.sum(x * x, axis=-1)
                inside = (rr >= self.size[0] ** 2) & (rr <= self.size[1] ** 2)
        return inside & np.all(np.isfinite(x), axis=-1)

    def distance(self, x) -> np.ndarray:
        return shape_distance(self, x)


def _ellipsoid_distance(axes: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Distance from interior points to the ellipsoid boundary.

    The nearest boundary point is p_i = a_i^2 x_i / (a_i^2 + t), with t the
    root in (-a_min^2, 0] of S(t) = sum (a_i x_i / (a_i^2 + t))^2 = 1.  The
    root is located in tau = t + a_min^2, which is exact near the pole, by
    Newton on S^(-1/2) - 1 (nearly linear there) with bisection as the
    safeguard, then polished in t when it lies away from the pole.
    Coordinates along the shortest axes are nudged off zero to keep the root
    bracketed; the nudge is subtracted at the end (distance is 1-Lipschitz),
    so the result is a lower bound up to rounding.
    """
    a2 = axes ** 2
    a_min2 = float(axes.min()) ** 2
    gap = a2 - a_min2
    short = gap == 0.0
    nudge = 1e-13 * float(axes.max())
    xa = np.abs(x)
    xs = np.where(short & (xa < nudge), nudge, xa)
    shift = np.sqrt(np.sum((xs - xa) ** 2, axis=-1))
    ax = axes * xs
    # S(lo) >= 1 and S(hi) <= 1
    lo = math.sqrt(a_min2) * np.max(np.where(short, xs, 0.0), axis=-1)
    hi = np.full(len(x), a_min2)
    tau = lo.copy()
    for _ in range(100):
        den = gap + tau[:, None]
        q2 = (ax / den) ** 2
        S = np.sum(q2, axis=-1)
        dS = -2.0 * np.sum(q2 / den, axis=-1)
        lo = np.where(S >= 1.0, np.maximum(lo, tau), lo)
        hi = np.where(S <= 1.0, np.minimum(hi, tau), hi)
        phi = S ** -0.5 - 1.0
        dphi = -0.5 * S ** -1.5 * dS
        with np.errstate(divide="ignore", invalid="ignore"):
            new = tau - phi / dphi
        bad = ~np.isfinite(new) | (new < lo) | (new > hi)
        new = np.where(bad, 0.5 * (lo + hi), new)
        step = np.abs(new - tau)
        tau = new
        if np.all(step <= 4.0 * _EPS_F * tau):
            break
    t = tau - a_min2
    far = tau > 0.5 * a_min2
    if np.any(far):
        tf = t[far]
        af, a2f = ax[far], a2
        for _ in range(3):
            den = a2f + tf[:, None]
            q2 = (af / den) ** 2
            S = np.sum(q2, axis=-1)
            dS = -2.0 * np.sum(q2 / den, axis=-1)
            tf = np.minimum(tf - (S - 1.0) / dS, 0.0)
        t[far] = tf
    den = np.where(far[:, None], a2 + t[:, None], gap + tau[:, None])
    d = np.abs(t) * np.sqrt(np.sum((xs / den) ** 2, axis=-1))
    return np.maximum(d * (1.0 - 1e-12) - shift, 0.0)


def shape_distance(shape: ShapeSpec, x) -> np.ndarray:
    """Euclidean distance from interior points to the boundary.

    Exact for ball, cube and annulus.  For the ellipsoid it is a lower bound
    within about 1e-12 relative (see ``_ellipsoid_distance``), the only
    approximate geometric primitive here.
    """
    x = shape._points(x)
    scalar = x.ndim == 1
    pts = np.atleast_2d(x)
    if not np.all(shape.contains(pts)):
        raise DomainError("shape_distance needs points inside the shape")
    if shape.kind == "ball":
        d = shape.size[0] - np.linalg.norm(pts, axis=-1)
    elif shape.kind == "cube":
        d = 0.5 * shape.size[0] - np.max(np.abs(pts), axis=-1)
    elif shape.kind == "annulus":
        rho = np.linalg.norm(pts, axis=-1)
        d = np.minimum(rho - shape.size[0], shape.size[1] - rho)
    else:
        d = _ellipsoid_distance(np.asarray(shape.size), pts)
    d = np.maximum(d, 0.0)
    return float(d[0]) if scalar else d


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo perimeter estimate.

    ``std_error`` is the sample standard deviation of the per-sample
    contributions divided by sqrt(samples).
    """

    value: float
    std_error: float
    samples: int
    seed: int
    converged: bool = True

    def compatible(self, target: float, k: float = 3.0) -> bool:
        return abs(self.value - target) <= k * self.std_error


def _beta_fn(a: float, b: float) -> float:
    return _gamma_product((a, b), (a + b,))


def mc_normalizer(shape: ShapeSpec, s: float) -> float:
    """Z_E = int_E d(x)^(-2s) dx for the sampling density of the estimator.

    For the ellipsoid this is the normaliser of the mapped-ball proposal,
    det(A) int_{B_1} (1 - |y|)^(-2s) dy.
    """
    s = check_s(s)
    n = shape.dim
    b = _beta_fn(1.0 - 2.0 * s, float(n))
    if shape.kind == "ball":
        return sphere_area(n) * shape.size[0] ** (n - 2.0 * s) * b
    if shape.kind == "cube":
        h = 0.5 * shape.size[0]
        return 2.0 * n * 2.0 ** (n - 1) * h ** (n - 2.0 * s) * b
    if shape.kind == "ellipsoid":
        return math.prod(shape.size) * sphere_area(n) * b
    z_in, z_out = _annulus_sides(shape, s)
    return sphere_area(n) * (z_in + z_out)


def _annulus_sides(shape: ShapeSpec, s: float) -> tuple[float, float]:
    """int_0^h rho^(N-1) t^(-2s) dt on the inner (rho = r0 + t) and outer (rho = r1 - t) halves."""
    n = shape.dim
    r0, r1 = shape.size
    h = 0.5 * (r1 - r0)
    out = []
    for base, sign in ((r0, 1.0), (r1, -1.0)):
        def f(t, base=base, sign=sign):
            return (base + sign * t) ** (n - 1) * t ** (-2.0 * s)

        scale = max(r0 + h, r1) ** (n - 1) * h ** (1.0 - 2.0 * s) / (1.0 - 2.0 * s)
        res = integrate_endpoint_singular(f, 0.0, h, (-2.0 * s, 0.0), 1e-13 * scale)
        if not res.converged:
            raise ConvergenceError("annulus normaliser did not converge", res)
        out.append(res.value)
    return out[0], out[1]


def _directions(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    g = rng.standard_normal((m, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _sample_interior(shape: ShapeSpec, s: float, rng, m: int, sides=None):
    """Points with density proportional to d^(-2s), their distance bound, and weight factor."""
    n = shape.dim
    if shape.kind in ("ball", "ellipsoid"):
        tau = rng.beta(1.0 - 2.0 * s, n, size=m)
        y = _directions(rng, m, n) * (1.0 - tau)[:, None]
        if shape.kind == "ball":
            R = shape.size[0]
            return R * y, R * tau, None
        axes = np.asarray(shape.size)
        x = y * axes
        # A maps B(y, tau) into the shape, so a_min * tau also bounds d from below
        d = np.maximum(_ellipsoid_distance(axes, x), axes.min() * tau * (1.0 - 1e-12))
        return x, d, (d / tau) ** (-2.0 * s)
    if shape.kind == "cube":
        h = 0.5 * shape.size[0]
        d = h * rng.beta(1.0 - 2.0 * s, n, size=m)
        inner = h - d
        x = rng.uniform(-1.0, 1.0, size=(m, n)) * inner[:, None]
        axis = rng.integers(0, n, size=m)
        sign = np.where(rng.random(m) < 0.5, -1.0, 1.0)
        x[np.arange(m), axis] = sign * inner
        return x, d, None
    # annulus: pick a side, then t from t^(-2s) on (0, h] thinned by rho^(N-1)
    r0, r1 = shape.size
    h = 0.5 * (r1 - r0)
    p_in = sides[0] / (sides[0] + sides[1])
    inner_side = rng.random(m) < p_in
    t = np.empty(m)
    todo = np.arange(m)
    while len(todo):
        k = len(todo)
        cand = h * rng.random(k) ** (1.0 / (1.0 - 2.0 * s))
        ins = inner_side[todo]
        rho = np.where(ins, r0 + cand, r1 - cand)
        rho_max = np.where(ins, r0 + h, r1)
        accept = rng.random(k) < (rho / rho_max) ** (n - 1)
        t[todo[accept]] = cand[accept]
        todo = todo[~accept]
    rho = np.where(inner_side, r0 + t, r1 - t)
    return _directions(rng, m, n) * rho[:, None], t, None


def _block(shape: ShapeSpec, s: float, seed: int, index: int, m: int, sides):
    """(sum of weights, sum of squared weights) of one block, in units of Z sigma / s."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))
    x, d, factor = _sample_interior(shape, s, rng, m, sides)
    u = 1.0 - rng.random(m)
    # beyond this radius every jump from inside the shape lands outside
    r_cap = 4.0 * shape.outer_radius()
    with np.errstate(over="ignore"):
        r = np.minimum(d * u ** (-0.5 / s), r_cap)
    y = x + r[:, None] * _directions(rng, m, shape.dim)
    hit = ~shape.contains(y)
    if factor is None:
        k = float(np.count_nonzero(hit))
        return k, k
    w = np.where(hit, factor, 0.0)
    return math.fsum(w), math.fsum(w * w)


def worker_count(workers: int | None = None) -> int:
    """Explicit count, else FRACPERIM_THREADS (0 or unset means all cores)."""
    if workers is None:
        env = os.environ.get("FRACPERIM_THREADS", "").strip()
        workers = int(env) if env else 0
    if workers < 0:
        raise DomainError("worker count must be non-negative")
    return workers or (os.cpu_count() or 1)


def mc_perimeter(
    shape: ShapeSpec,
    s: float,
    samples: int = 1_000_000,
    seed: int = 42,
    workers: int | None = None,
) -> McEstimate:
    """Unbiased Monte Carlo estimate of P_s(shape).

    Samples are split into fixed blocks of 65536; block k draws from a
    Philox stream keyed by (seed, k), and the block sums are combined in
    block order, so the result is bit-identical for any worker count.
    """
    s = check_s(s)
    if isinstance(samples, bool) or int(samples) != samples or samples < 2:
        raise DomainError(f"samples must be an integer >= 2, got {samples!r}")
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise DomainError(f"seed must be a non-negative integer, got {seed!r}")
    samples, seed = int(samples), int(seed)
    sides = _annulus_sides(shape, s) if shape.kind == "annulus" else None
    if sides is not None:
        z = sphere_area(shape.dim) * (sides[0] + sides[1])
    else:
        z = mc_normalizer(shape, s)
    weight = z * sphere_area(shape.dim) / s

    sizes = [BLOCK] * (samples // BLOCK)
    if samples % BLOCK:
        sizes.append(samples % BLOCK)
    jobs = [(shape, s, seed, k, m, sides) for k, m in enumerate(sizes)]
    nw = min(worker_count(workers), len(jobs))
    if nw > 1:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            parts = list(pool.map(lambda a: _block(*a), jobs))
    else:
        parts = [_block(*a) for a in jobs]
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    return McEstimate(
        value=weight * mean,
        std_error=weight * math.sqrt(var / samples),
        samples=samples,
        seed=seed,
    )
