"""Radial mappings f(x) = (x/|x|) * rho(|x|) of the unit ball."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from .space import SpaceParams, unit_ball_volume

DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class RadialProfile:
    """Scalar radius profile ``rho`` together with its derivative.

    ``kind == "power"`` means ``rho(r) = coeff * r**theta``; ``"custom"``
    carries user callables ``rho`` and ``drho`` (derivative supplied
    analytically, never differentiated numerically).
    """

    kind: str
    theta: float = 1.0
    coeff: float = 1.0
    rho_fn: Optional[Callable[[float], float]] = field(default=None, compare=False)
    drho_fn: Optional[Callable[[float], float]] = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        if self.kind == "power":
            if not self.theta > 0:
                raise ValueError(f"power profile needs theta > 0, got {self.theta}")
            if not self.coeff > 0:
                raise ValueError(f"power profile needs coeff > 0, got {self.coeff}")
        elif self.kind == "custom":
            if self.rho_fn is None or self.drho_fn is None:
                raise ValueError("custom profile needs both rho and its derivative")
        else:
            raise ValueError(f"unknown profile kind {self.kind!r}")

    @property
    def is_power(self) -> bool:
        return self.kind == "power"

    def rho(self, r):
        if self.is_power:
            return self.coeff * np.power(r, self.theta)
        return self.rho_fn(r)

    def drho(self, r):
        if self.is_power:
            return self.coeff * self.theta * np.power(r, self.theta - 1.0)
        return self.drho_fn(r)

    def describe(self) -> dict:
        if self.is_power:
            d = {"kind": "power", "theta": self.theta}
            if self.coeff != 1.0:
                d["coeff"] = self.coeff
            return d
        return {"kind": "custom", "label": self.label}


def power_profile(theta: float, coeff: float = 1.0) -> RadialProfile:
    return RadialProfile("power", theta=float(theta), coeff=float(coeff))


def identity_profile() -> RadialProfile:
    return power_profile(1.0)


def theorem3_theta(space: SpaceParams, alpha: float, eps: float) -> float:
    """Exponent of the counterexample map x * |x|^(n/(alpha(p-n)) + eps)."""
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return 1.0 + space.n / (alpha * (space.p - space.n)) + eps


def custom_profile(rho, drho, label: str = "custom") -> RadialProfile:
    return RadialProfile("custom", rho_fn=rho, drho_fn=drho, label=label)


def scaled_profile(profile: RadialProfile, scale: float) -> RadialProfile:
    """Profile of y -> f(scale * y), i.e. t -> rho(scale * t)."""
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    if profile.is_power:
        return power_profile(profile.theta, profile.coeff * scale ** profile.theta)
    return custom_profile(
        lambda t: profile.rho(scale * np.asarray(t)),
        lambda t: scale * profile.drho(scale * np.asarray(t)),
        label=f"{profile.label}@{scale:g}",
    )


def _check_radius(r: float) -> float:
    r = float(r)
    if not 0.0 < r < 1.0:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    return r


@dataclass(frozen=True)
class RadialMap:
    space: SpaceParams
    profile: RadialProfile

    def eval(self, x):
        """Image of a point (or an (m, n) array of points) of the unit ball."""
        x = np.asarray(x, dtype=float)
        pts = np.atleast_2d(x)
        if pts.shape[-1] != self.space.n:
            raise ValueError(f"expected points in R^{self.space.n}, got shape {x.shape}")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(norms >= 1.0):
            raise ValueError("points must lie in the open unit ball")
        out = np.zeros_like(pts)
        nz = norms > 0
        out[nz] = pts[nz] * (self.profile.rho(norms[nz]) / norms[nz])[:, None]
        return out[0] if x.ndim == 1 else out

    def lf_max(self, r: float) -> float:
        """Max of |f| over the sphere |x| = r; rho(r) for a radial map."""
        return float(self.profile.rho(_check_radius(r)))

    def image_ball_measure(self, r: float) -> float:
        """Lebesgue measure of f(B(0, r)) = B(0, rho(r))."""
        return unit_ball_volume(self.space.n) * self.lf_max(r) ** self.space.n

    def check_ball_image_inclusion(self, r: float, samples: int = 1000,
                                   seed: int = DEFAULT_SEED) -> bool:
        """Confirm f(B(0, r)) lies in the closed ball of radius L_f(r) on
        ``samples`` scrambled-Halton points of B(0, r)."""
        r = _check_radius(r)
        if samples < 1:
            raise ValueError("samples must be >= 1")
        pts = ball_samples(self.space.n, r, samples, seed)
        images = self.eval(pts)
        bound = self.lf_max(r)
        return bool(np.all(np.linalg.norm(images, axis=1) <= bound * (1 + 1e-12)))


def ball_samples(n: int, r: float, samples: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Low-discrepancy points of the open ball B(0, r) (cube rejection)."""
    sampler = qmc.Halton(d=n, scramble=True, seed=seed)
    keep = []
    have = 0
    while have < samples:
        batch = 2.0 * sampler.random(max(64, 2 * samples)) - 1.0
        batch = batch[np.linalg.norm(batch, axis=1) < 1.0]
        keep.append(batch)
        have += len(batch)
    return r * np.concatenate(keep)[:samples]


def lower_radius_from_measure(space: SpaceParams, volume: float) -> float:
    """Radius of the ball in R^n having the given measure."""
    if volume < 0:
        raise ValueError(f"volume must be non-negative, got {volume}")
    return (volume / unit_ball_volume(space.n)) ** (1.0 / space.n)


def make_map(space: SpaceParams, spec: dict) -> RadialMap:
    """Build a map from a config dict such as ``{"kind": "power", "theta": 0.5}``
    or ``{"kind": "theorem3", "alpha": 2.0, "eps": 0.1}``."""
    kind = spec.get("kind")
    if kind == "power":
        prof = power_profile(spec["theta"], spec.get("coeff", 1.0))
    elif kind == "identity":
        prof = identity_profile()
    elif kind == "theorem3":
        prof = power_profile(theorem3_theta(space, spec["alpha"], spec["eps"]))
    else:
        raise ValueError(f"unknown map kind {kind!r}")
    return RadialMap(space, prof)


def lf_ratio(m: RadialMap, r: float) -> float:
    return m.lf_max(r) / r


__all__ = [
    "RadialProfile", "RadialMap", "power_profile", "identity_profile",
    "custom_profile", "scaled_profile", "theorem3_theta", "ball_samples",
    "lower_radius_from_measure", "make_map", "lf_ratio",
]
