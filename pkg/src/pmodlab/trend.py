"""Log-log slope fits used as numerical stand-ins for limits at the origin."""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

#: slope tolerance used to decide between "flat", "growing" and "decaying"
SLOPE_TOL = 0.02


def loglog_slope(x, y) -> float:
    """Least-squares slope of log(y) against log(x)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("need at least two matching (x, y) samples")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(ly) == 0.0:
        return 0.0
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def _shell_ratio_log(k: float, a: float, b: float) -> float:
    """log of (d1^k - d2^k) / (d2^k - d3^k) with a = log(d1/d2), b = log(d2/d3)."""
    if k == 0.0:
        return math.log(a / b)
    return k * b + math.log(math.expm1(k * a) / math.expm1(k * b))


def shell_exponent(radii, shells, bracket: float = 60.0) -> float:
    """Growth exponent k of shell integrals int_{d_{i+1}}^{d_i} c r^(k-1) dr.

    ``shells[i]`` is the integral over (radii[i+1], radii[i]) for strictly
    decreasing radii.  Each consecutive pair of shells fixes k exactly for a
    power-law integrand, whatever the spacing of the radii (the shell ratio is
    strictly increasing in k); the estimates from all pairs are averaged.
    """
    radii = np.asarray(radii, dtype=float)
    shells = np.asarray(shells, dtype=float)
    if radii.size != shells.size + 1 or shells.size < 2:
        raise ValueError("need n+1 radii for n >= 2 shells")
    if np.any(np.diff(radii) >= 0) or radii[-1] <= 0:
        raise ValueError("radii must be positive and strictly decreasing")
    if np.any(shells <= 0):
        raise ValueError("shell integrals must be positive")
    logs = np.log(radii)
    ks = []
    for i in range(shells.size - 1):
        a, b = logs[i] - logs[i + 1], logs[i + 1] - logs[i + 2]
        target = math.log(shells[i] / shells[i + 1])

        def h(k, a=a, b=b, target=target):
            return _shell_ratio_log(k, a, b) - target

        lo, hi = -bracket, bracket
        if h(lo) > 0 or h(hi) < 0:
            raise ValueError("shell exponent outside the search bracket")
        ks.append(brentq(h, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return float(np.mean(ks))


def classify(slope: float, tol: float = SLOPE_TOL) -> str:
    """'zero', 'infinite' or 'finite' limit at 0 for a quantity ~ eps**slope."""
    if math.isnan(slope):
        return "unknown"
    if slope > tol:
        return "zero"
    if slope < -tol:
        return "infinite"
    return "finite"
