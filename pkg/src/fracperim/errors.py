"""Exceptions and argument guards shared by every route."""

from __future__ import annotations

import math
from dataclasses import dataclass

# Numerical routes keep this distance from both ends of (0, 1/2).
S_GUARD = 1e-6


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class InfinitePerimeterError(DomainError):
    """Raised for s >= 1/2: every set with nonempty boundary has infinite s-perimeter."""


class ConvergenceError(RuntimeError):
    """A numerical engine did not reach the requested tolerance."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def check_dim(n) -> int:
    if isinstance(n, bool) or not float(n).is_integer():
        raise DomainError(f"dimension must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise DomainError(f"dimension must be N >= 2, got {n}")
    return n


def check_s(s, *, numerical: bool = False) -> float:
    s = float(s)
    if math.isnan(s):
        raise DomainError("s is NaN")
    if s >= 0.5:
        raise InfinitePerimeterError(
            f"s = {s:g} >= 1/2: the s-perimeter is infinite; valid range is (0, 1/2)"
        )
    if s <= 0.0:
        raise DomainError(f"s = {s:g} outside the valid range (0, 1/2)")
    if numerical and not (S_GUARD <= s <= 0.5 - S_GUARD):
        raise DomainError(
            f"s = {s:g} too close to an endpoint for numerical routes; "
            f"need {S_GUARD:g} <= s <= {0.5 - S_GUARD:g}"
        )
    return s


@dataclass(frozen=True)
class Order:
    """Dimension N >= 2 and fractional order 0 < s < 1/2."""

    n: int
    s: float

    def __post_init__(self):
        object.__setattr__(self, "n", check_dim(self.n))
        object.__setattr__(self, "s", check_s(self.s))
