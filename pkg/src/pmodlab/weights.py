"""Radial weight fields Q and the ball/sphere averages built from them.

Every integral over a ball or annulus reduces to a 1-D radial integral
``int omega_{n-1} r^(n-1) q(r) dr`` through the spherical-mean identity.
Power-law weights are integrated in closed form by default; the quadrature
route (``method="quadrature"``) is kept available as an independent check.
Divergent integrals come back as ``math.inf`` rather than raising.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import quadrature
from .distortion import k_ip, k_ip_power_law
from .radial import RadialMap, scaled_profile
from .space import SpaceParams
from .trend import SLOPE_TOL, classify, loglog_slope, shell_exponent

INF = math.inf


@dataclass(frozen=True)
class WeightField:
    """A radial weight Q(x) = q(|x|) >= 0.

    kinds: ``constant`` (value), ``radial_power`` (coeff * |x|**exp),
    ``from_map`` (K_{I,p} of ``fmap``) and ``radial`` (arbitrary callable
    ``fn`` of the radius, used for rescaled custom weights).
    """

    kind: str
    value: float = 0.0
    coeff: float = 0.0
    exp: float = 0.0
    fmap: Optional[RadialMap] = None
    fn: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind == "constant":
            if not self.value >= 0:
                raise ValueError(f"constant weight must be >= 0, got {self.value}")
        elif self.kind == "radial_power":
            if not self.coeff >= 0:
                raise ValueError(f"weight coefficient must be >= 0, got {self.coeff}")
        elif self.kind == "from_map":
            if self.fmap is None:
                raise ValueError("from_map weight needs a map")
        elif self.kind == "radial":
            if self.fn is None:
                raise ValueError("radial weight needs a callable")
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")

    def power_law(self) -> tuple[float, float] | None:
        """(C, s) when Q = C |x|^s exactly, else None."""
        if self.kind == "constant":
            return self.value, 0.0
        if self.kind == "radial_power":
            return self.coeff, self.exp
        if self.kind == "from_map":
            return k_ip_power_law(self.fmap)
        return None

    def at_radius(self, r):
        """q(r), vectorised over numpy arrays of radii."""
        r = np.asarray(r, dtype=float)
        if self.kind == "constant":
            return np.full_like(r, self.value) if r.ndim else self.value
        if self.kind == "radial_power":
            if self.coeff == 0.0:
                return np.zeros_like(r) if r.ndim else 0.0
            return self.coeff * np.power(r, self.exp)
        if self.kind == "from_map":
            if r.ndim:
                return np.array([k_ip(self.fmap, float(t)) for t in r.ravel()]).reshape(r.shape)
            return k_ip(self.fmap, float(r))
        return self.fn(r)

    def describe(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        if self.kind == "radial_power":
            return {"kind": "radial_power", "coeff": self.coeff, "exp": self.exp}
        if self.kind == "from_map":
            return {"kind": "from_map", "map": self.fmap.profile.describe()}
        return {"kind": "radial"}


def constant(value: float) -> WeightField:
    return WeightField("constant", value=float(value))


def radial_power(coeff: float, exp: float) -> WeightField:
    return WeightField("radial_power", coeff=float(coeff), exp=float(exp))


def from_map(fmap: RadialMap) -> WeightField:
    return WeightField("from_map", fmap=fmap)


def make_weight(spec: dict, fmap: RadialMap | None = None) -> WeightField:
    kind = spec.get("kind")
    if kind == "constant":
        return constant(spec.get("value", 1.0))
    if kind == "radial_power":
        return radial_power(spec.get("coeff", 1.0), spec["exp"])
    if kind == "from_map":
        if fmap is None:
            raise ValueError("weight kind 'from_map' needs a configured map")
        return from_map(fmap)
    raise ValueError(f"unknown weight kind {kind!r}")


@dataclass(frozen=True)
class EpsLadder:
    """Strictly decreasing radii in (0, 1) probing the limit eps -> 0."""

    eps_values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.eps_values)
        if len(vals) < 3:
            raise ValueError("ladder needs at least 3 radii")
        if any(not 0.0 < v < 1.0 for v in vals):
            raise ValueError("ladder radii must lie in (0, 1)")
        if any(b >= a for a, b in zip(vals, vals[1:])):
            raise ValueError("ladder radii must be strictly decreasing")
        object.__setattr__(self, "eps_values", vals)

    @classmethod
    def geometric(cls, start: float, ratio: float = 0.5, count: int = 4) -> "EpsLadder":
        return cls(tuple(start * ratio ** k for k in range(count)))

    def __iter__(self):
        return iter(self.eps_values)

    def __len__(self):
        return len(self.eps_values)


DEFAULT_LADDER = EpsLadder((0.1, 0.05, 0.025, 0.0125))


def _pos(x: float, what: str) -> float:
    x = float(x)
    if not x > 0:
        raise ValueError(f"{what} must be positive, got {x}")
    return x


def spherical_mean(w: WeightField, space: SpaceParams, r: float) -> float:
    """Mean of Q over S(0, r); for a radial weight, its value at radius r."""
    r = _pos(r, "radius")
    v = float(w.at_radius(r))
    return v if math.isfinite(v) else INF


def _power_radial_integral(C: float, k: float, a: float, b: float) -> float:
    """int_a^b C r^(k-1) dr with a >= 0 (inf when divergent at a = 0)."""
    if C == 0.0:
        return 0.0
    if a == 0.0:
        return C * b ** k / k if k > 0 else INF
    if k == 0.0:
        return C * math.log(b / a)
    return C * (b ** k - a ** k) / k


def _quad_radial(space: SpaceParams, g, a: float, b: float) -> float:
    om = space.omega_sphere
    n = space.n

    def integrand(r):
        return om * np.power(r, n - 1) * g(r)

    if a == 0.0:
        try:
            return quadrature.integrate_from_zero(integrand, b)
        except quadrature.DivergentIntegral:
            return INF
    return quadrature.integrate_log_split(integrand, a, b)


def _check_method(method: str):
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown integration method {method!r}")


def annulus_integral(w: WeightField, space: SpaceParams, a: float, b: float,
                     power: float = 1.0, method: str = "auto") -> float:
    """int_{A(0,a,b)} Q^power dm (a = 0 gives the ball)."""
    _check_method(method)
    if not 0.0 <= a < b:
        raise ValueError(f"need 0 <= a < b, got a={a}, b={b}")
    law = w.power_law()
    if method == "closed" and law is None:
        raise ValueError("closed form needs a power-law weight")
    if law is not None and method != "quadrature":
        C, s = law
        return _power_radial_integral(space.omega_sphere * C ** power,
                                      space.n + power * s, a, b)
    if law is not None and law[0] > 0 and a == 0.0 and space.n + power * law[1] <= 0:
        # exponent test: r^(n-1+power*s) is not integrable at 0
        return INF
    return _quad_radial(space, lambda r: np.power(w.at_radius(r), power), a, b)


def ball_integral(w: WeightField, space: SpaceParams, eps: float,
                  method: str = "auto") -> float:
    """int_{B(0, eps)} Q dm; ``inf`` when Q is not integrable at the origin."""
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return annulus_integral(w, space, 0.0, eps, method=method)


def ball_average(w: WeightField, space: SpaceParams, eps: float,
                 method: str = "auto") -> float:
    total = ball_integral(w, space, eps, method)
    return total / (space.omega_n * eps ** space.n)


@dataclass(frozen=True)
class Q0Estimate:
    value: float
    trend: float
    averages: tuple
    limit: str  # "zero", "finite", "infinite" or "divergent"

    def as_dict(self) -> dict:
        return {"value": self.value, "trend": self.trend,
                "averages": list(self.averages), "limit": self.limit}


def q0_estimate(w: WeightField, space: SpaceParams, ladder: EpsLadder = DEFAULT_LADDER,
                method: str = "auto", tol: float = SLOPE_TOL) -> Q0Estimate:
    """Minimum of the ball averages over the ladder plus their log-log trend.

    A positive trend means the averages vanish as eps -> 0 (Q0 = 0), a
    negative one that they blow up (Q0 = inf).
    """
    avgs = tuple(ball_average(w, space, e, method) for e in ladder)
    if any(not math.isfinite(a) for a in avgs):
        return Q0Estimate(INF, math.nan, avgs, "divergent")
    value = min(avgs)
    if all(a == 0.0 for a in avgs):
        return Q0Estimate(0.0, math.nan, avgs, "zero")
    if any(a <= 0.0 for a in avgs):
        return Q0Estimate(value, math.nan, avgs, "zero")
    trend = loglog_slope(list(ladder), avgs)
    return Q0Estimate(value, trend, avgs, classify(trend, tol))


def alpha_norm_on_annulus(w: WeightField, space: SpaceParams, alpha: float,
                          delta: float, eps0: float, method: str = "auto") -> float:
    """int_{A(0, delta, eps0)} Q^alpha dm."""
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    if not 0.0 < delta < eps0 < 1.0:
        raise ValueError(f"need 0 < delta < eps0 < 1, got delta={delta}, eps0={eps0}")
    return annulus_integral(w, space, delta, eps0, power=alpha, method=method)


DEFAULT_DELTAS = tuple(10.0 ** -k for k in range(3, 9))


@dataclass(frozen=True)
class AlphaDiagnostic:
    deltas: tuple
    partials: tuple
    slope: float
    integrable: bool

    def as_dict(self) -> dict:
        return {"deltas": list(self.deltas), "partials": list(self.partials),
                "slope": self.slope, "integrable": self.integrable}


def alpha_integrability(w: WeightField, space: SpaceParams, alpha: float,
                        eps0: float = 0.5, deltas=DEFAULT_DELTAS, method: str = "auto",
                        tol: float = SLOPE_TOL) -> AlphaDiagnostic:
    """Decide Q in L^alpha(B(0, eps0)) from the growth of partial integrals.

    Shell integrals over A(0, delta_{i+1}, delta_i) are computed directly
    and their growth exponent is solved for pairwise; for a power weight it
    is exactly alpha*s + n on any ladder, and a positive value means the
    partial integrals converge.
    """
    deltas = tuple(float(d) for d in deltas)
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be strictly decreasing")
    parts = tuple(alpha_norm_on_annulus(w, space, alpha, d, eps0, method) for d in deltas)
    shells = [annulus_integral(w, space, lo, hi, power=alpha, method=method)
              for hi, lo in zip(deltas, deltas[1:])]
    if all(v == 0.0 for v in shells):
        return AlphaDiagnostic(deltas, parts, math.inf, True)
    slope = shell_exponent(deltas, shells)
    return AlphaDiagnostic(deltas, parts, slope, slope > tol)


def rescale_weight(w: WeightField, space: SpaceParams, r: float) -> WeightField:
    """The weight y -> r^(n-p) Q(r y) of the rescaled map y -> f(r y)."""
    if not 0.0 < r <= 1.0:
        raise ValueError(f"scale must lie in (0, 1], got {r}")
    f = r ** (space.n - space.p)
    if w.kind == "constant":
        return constant(f * w.value)
    if w.kind == "radial_power":
        return radial_power(f * r ** w.exp * w.coeff, w.exp)
    if w.kind == "from_map":
        # K_{I,p} of y -> f(r y) is r^(n-p) K_{I,p}(r y)
        return from_map(RadialMap(w.fmap.space, scaled_profile(w.fmap.profile, r)))
    fn = w.fn
    return WeightField("radial", fn=lambda t: f * fn(r * np.asarray(t)))
