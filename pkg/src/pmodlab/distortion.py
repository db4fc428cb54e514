"""Stretches, Jacobian and the inner p-distortion K_{I,p} of radial maps.

The derivative of a radial map is diagonal in the radial/tangential frame:
one radial singular value ``rho'(r)`` and ``n - 1`` tangential ones equal to
``rho(r) / r``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .radial import RadialMap


@dataclass(frozen=True)
class StretchData:
    lambda_r: float
    lambda_tau: float
    jacobian_abs: float
    min_stretch: float

    def as_dict(self) -> dict:
        return asdict(self)


def _radius(r: float) -> float:
    r = float(r)
    if not 0.0 < r < 1.0:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    return r


def _assemble(n: int, lam_r: float, lam_t: float) -> StretchData:
    return StretchData(lam_r, lam_t, lam_t ** (n - 1) * lam_r, min(lam_r, lam_t))


def stretches(fmap: RadialMap, r: float) -> StretchData:
    r = _radius(r)
    d = float(fmap.profile.drho(r))
    if not math.isfinite(d):
        raise ValueError(f"profile derivative undefined at r={r}")
    lam_r = abs(d)
    lam_t = float(fmap.profile.rho(r)) / r
    return _assemble(fmap.space.n, lam_r, lam_t)


def k_ip(fmap: RadialMap, r: float) -> float:
    """Inner p-distortion: J / l^p if J != 0, 1 if f' = 0, infinity otherwise."""
    s = stretches(fmap, r)
    if s.jacobian_abs != 0.0:
        return s.jacobian_abs / s.min_stretch ** fmap.space.p
    if s.lambda_r == 0.0 and s.lambda_tau == 0.0:
        return 1.0
    return math.inf


def k_ip_power_law(fmap: RadialMap) -> tuple[float, float] | None:
    """(C, s) with K_{I,p}(x) = C |x|^s for power profiles, else None.

    For rho = a r^theta: K = a^(n-p) theta / min(theta, 1)^p * r^((n-p)(theta-1)).
    """
    prof = fmap.profile
    if not prof.is_power:
        return None
    n, p = fmap.space.n, fmap.space.p
    th = prof.theta
    coeff = prof.coeff ** (n - p) * th / min(th, 1.0) ** p
    return coeff, (n - p) * (th - 1.0)


@dataclass(frozen=True)
class FDCheck:
    analytic: StretchData
    numeric: StretchData
    max_rel_err: float


def fd_check(fmap: RadialMap, r: float, h: float = 1e-5) -> FDCheck:
    """Compare analytic stretches with a central difference of rho."""
    r = float(r)
    if not (0.0 < r - h and r + h < 1.0):
        raise ValueError(f"need 0 < r-h and r+h < 1 (r={r}, h={h})")
    rho = fmap.profile.rho
    analytic = stretches(fmap, r)
    lam_r = abs((float(rho(r + h)) - float(rho(r - h))) / (2.0 * h))
    lam_t = float(rho(r)) / r
    numeric = _assemble(fmap.space.n, lam_r, lam_t)
    errs = []
    for a, b in zip(asdict(analytic).values(), asdict(numeric).values()):
        scale = max(abs(a), abs(b))
        errs.append(0.0 if scale == 0 else abs(a - b) / scale)
    return FDCheck(analytic, numeric, max(errs))
