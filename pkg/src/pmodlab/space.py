"""Dimension/exponent parameters and the unit-ball constants built on them."""
from __future__ import annotations

import math
from dataclasses import dataclass

#: minimum accepted gap p - n; exponents such as 1/(n-p) blow up as p -> n+
P_GUARD = 1e-6


def _check_dim(n) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"dimension must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    return n


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n, pi^(n/2) / Gamma(n/2 + 1).

    Evaluated through log-Gamma so that large n does not overflow.
    """
    n = _check_dim(n)
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1.0))


def unit_sphere_area(n: int) -> float:
    """Surface area of the unit sphere S^(n-1) in R^n."""
    n = _check_dim(n)
    return n * unit_ball_volume(n)


@dataclass(frozen=True)
class GeometricConstants:
    omega_n: float
    omega_sphere: float


@dataclass(frozen=True)
class SpaceParams:
    """Dimension ``n >= 2`` and exponent ``p > n``."""

    n: int
    p: float
    guard: float = P_GUARD

    def __post_init__(self):
        object.__setattr__(self, "n", _check_dim(self.n))
        p = float(self.p)
        if not math.isfinite(p):
            raise ValueError(f"p must be finite, got {self.p!r}")
        if p - self.n < self.guard:
            raise ValueError(
                f"p must exceed n by at least {self.guard:g} (got n={self.n}, p={p:g})"
            )
        object.__setattr__(self, "p", p)

    @property
    def omega_n(self) -> float:
        return unit_ball_volume(self.n)

    @property
    def omega_sphere(self) -> float:
        return unit_sphere_area(self.n)

    def constants(self) -> GeometricConstants:
        return GeometricConstants(self.omega_n, self.omega_sphere)
