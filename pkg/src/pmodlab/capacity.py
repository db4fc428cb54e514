"""p-capacity of spherical condensers: bounds, closed form and a variational solver.

All condensers are concentric about the origin: E = (B(0, r_outer), closed B(0, r_inner)).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_banded

from . import quadrature
from .space import SpaceParams, unit_ball_volume
from .weights import INF, WeightField, annulus_integral, constant


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SphericalCondenser:
    r_inner: float
    r_outer: float

    def __post_init__(self):
        a, b = float(self.r_inner), float(self.r_outer)
        if not 0.0 < a < b or not math.isfinite(b):
            raise ValueError(f"need 0 < r_inner < r_outer, got ({a}, {b})")
        object.__setattr__(self, "r_inner", a)
        object.__setattr__(self, "r_outer", b)

    def measures(self, space: SpaceParams) -> tuple[float, float]:
        """Lebesgue measures (m(A), m(C)) of the outer and inner balls."""
        om = unit_ball_volume(space.n)
        return om * self.r_outer ** space.n, om * self.r_inner ** space.n


@dataclass(frozen=True)
class CapacityBounds:
    lower_mazya: float
    upper_lemma1: float
    exact_spherical: Optional[float] = None
    variational: Optional[float] = None
    grid_points: Optional[int] = None

    def as_dict(self) -> dict:
        return asdict(self)


def _ring(r1: float, r2: float):
    r1, r2 = float(r1), float(r2)
    if not 0.0 < r1 < r2:
        raise ValueError(f"need 0 < r1 < r2, got ({r1}, {r2})")
    return r1, r2


def weighted_ring_integral(w: WeightField, space: SpaceParams, r1: float, r2: float,
                           method: str = "auto") -> float:
    """I = int_{r1}^{r2} dr / (r^((n-1)/(p-1)) q(r)^(1/(p-1)))."""
    r1, r2 = _ring(r1, r2)
    n, p = space.n, space.p
    law = w.power_law()
    if law is not None and method != "quadrature":
        C, s = law
        if C == 0.0:
            return INF
        k = 1.0 - (n - 1 + s) / (p - 1)
        c = C ** (-1.0 / (p - 1))
        if k == 0.0:
            return c * math.log(r2 / r1)
        return c * (r2 ** k - r1 ** k) / k

    def integrand(r):
        q = np.asarray(w.at_radius(r), dtype=float)
        with np.errstate(divide="ignore"):
            return np.power(r, -(n - 1) / (p - 1)) * np.power(q, -1.0 / (p - 1))

    probe = integrand(np.linspace(r1, r2, 257))
    if np.any(np.isinf(probe)):
        # q vanishes on part of the ring
        return INF
    return quadrature.integrate_log_split(integrand, r1, r2)


def eta0(w: WeightField, space: SpaceParams, r1: float, r2: float, r: float,
         ring_integral: float | None = None) -> float:
    """Extremal density 1 / (I r^((n-1)/(p-1)) q(r)^(1/(p-1))) on (r1, r2).

    Identically zero when I is infinite.
    """
    r1, r2 = _ring(r1, r2)
    if not r1 < r < r2:
        raise ValueError(f"r must lie in ({r1}, {r2}), got {r}")
    I = weighted_ring_integral(w, space, r1, r2) if ring_integral is None else ring_integral
    if math.isinf(I):
        return 0.0
    if I <= 0.0:
        raise ValueError("eta0 needs a positive ring integral")
    q = float(w.at_radius(r))
    if q == 0.0:
        return INF
    n, p = space.n, space.p
    return 1.0 / (I * r ** ((n - 1) / (p - 1)) * q ** (1.0 / (p - 1)))


def eta0_mass(w: WeightField, space: SpaceParams, r1: float, r2: float) -> float:
    """int_{r1}^{r2} eta0 dr by quadrature; 1 whenever I is finite and positive."""
    I = weighted_ring_integral(w, space, r1, r2)

    def f(r):
        return np.array([eta0(w, space, r1, r2, float(t), I) for t in np.ravel(r)])

    return quadrature.integrate_log_split(f, r1, r2)


def lemma1_cap_upper(w: WeightField, space: SpaceParams, cond: SphericalCondenser,
                     method: str = "auto") -> float:
    """omega_{n-1} / I^(p-1): upper bound for cap_p of the image condenser."""
    I = weighted_ring_integral(w, space, cond.r_inner, cond.r_outer, method)
    if math.isinf(I):
        return 0.0
    if I == 0.0:
        return INF
    return space.omega_sphere / I ** (space.p - 1)


def mazya_cap_lower(space: SpaceParams, mA: float, mC: float) -> float:
    """Measure-based lower bound for cap_p(A, C) when p > n."""
    if not mA > mC > 0:
        raise ValueError(f"need m(A) > m(C) > 0, got m(A)={mA}, m(C)={mC}")
    n, p = space.n, space.p
    e = (p - n) / (n * (p - 1))
    gap = mA ** e - mC ** e
    if gap <= 0.0:
        return INF
    return n * space.omega_n ** (p / n) * ((p - n) / (p - 1)) ** (p - 1) * gap ** (1 - p)


def exact_spherical_cap(space: SpaceParams, cond: SphericalCondenser) -> float:
    """Closed-form p-capacity of the concentric spherical condenser."""
    n, p = space.n, space.p
    k = (p - n) / (p - 1)
    gap = cond.r_outer ** k - cond.r_inner ** k
    if gap <= 0.0:
        return INF
    return space.omega_sphere * k ** (p - 1) * gap ** (1 - p)


def radial_grid(cond: SphericalCondenser, cells: int) -> np.ndarray:
    """Log-uniform nodes (clustered at r_inner); grids with cells N and kN nest."""
    t = np.arange(cells + 1) / cells
    r = cond.r_inner * (cond.r_outer / cond.r_inner) ** t
    r[0], r[-1] = cond.r_inner, cond.r_outer
    return r


def cell_coefficients(space: SpaceParams, r: np.ndarray) -> np.ndarray:
    """a_i such that the p-energy of a piecewise-linear profile is sum a_i |du_i|^p."""
    n, p = space.n, space.p
    h = np.diff(r)
    shell = space.omega_sphere * np.diff(r ** n) / n
    return shell / h ** p


@dataclass(frozen=True)
class VariationalResult:
    energy: float
    cells: int
    iterations: int
    nodes: np.ndarray
    profile: np.ndarray


def variational_solve(space: SpaceParams, cond: SphericalCondenser, grid_points: int = 4096,
                      max_iter: int = 200, rtol: float = 1e-12) -> VariationalResult:
    """Minimise the discrete radial p-energy with u(r_inner)=1, u(r_outer)=0.

    ``grid_points`` is the number of cells.  The energy is convex and C^2 for
    p > 2, so a damped Newton iteration on the interior nodal values is used;
    its Hessian is tridiagonal.
    """
    if grid_points < 16:
        raise ValueError("grid_points must be >= 16")
    p = space.p
    r = radial_grid(cond, grid_points)
    a = cell_coefficients(space, r)
    u = np.linspace(1.0, 0.0, grid_points + 1)

    def energy(v):
        return float(np.sum(a * np.abs(np.diff(v)) ** p))

    E = energy(u)
    for it in range(1, max_iter + 1):
        d = np.diff(u)
        flux = p * a * np.abs(d) ** (p - 2) * d
        grad = flux[:-1] - flux[1:]
        stiff = p * (p - 1) * a * np.abs(d) ** (p - 2)
        ab = np.zeros((3, grid_points - 1))
        ab[1] = stiff[:-1] + stiff[1:]
        ab[0, 1:] = -stiff[1:-1]
        ab[2, :-1] = -stiff[1:-1]
        step = -solve_banded((1, 1), ab, grad)
        slope = float(grad @ step)
        if -slope <= 1e-15 * E:
            return VariationalResult(E, grid_points, it, r, u)
        t = 1.0
        while True:
            trial = u.copy()
            trial[1:-1] += t * step
            E_new = energy(trial)
            if E_new <= E + 1e-4 * t * slope:
                break
            t *= 0.5
            if t < 1e-12:
                raise ConvergenceError(f"line search stalled at energy {E:.12g}")
        u = trial
        decrease = (E - E_new) / E_new
        E = E_new
        if decrease < rtol:
            return VariationalResult(E, grid_points, it, r, u)
    raise ConvergenceError(f"no convergence in {max_iter} Newton steps (energy {E:.12g})")


def variational_cap(space: SpaceParams, cond: SphericalCondenser, grid_points: int = 4096) -> float:
    """Discrete minimal p-energy; approaches exact_spherical_cap from above."""
    return variational_solve(space, cond, grid_points).energy


def ring_box_bound(w: WeightField, space: SpaceParams, eps: float, method: str = "auto") -> float:
    """eps^(-p) * int_{A(0, eps, 2 eps)} Q dm, the box-density ring bound."""
    eps = float(eps)
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    return annulus_integral(w, space, eps, 2 * eps, method=method) / eps ** space.p


def capacity_bounds(space: SpaceParams, cond: SphericalCondenser, w: WeightField | None = None,
                    grid_points: int | None = 4096) -> CapacityBounds:
    w = constant(1.0) if w is None else w
    mA, mC = cond.measures(space)
    var = variational_cap(space, cond, grid_points) if grid_points else None
    return CapacityBounds(
        lower_mazya=mazya_cap_lower(space, mA, mC),
        upper_lemma1=lemma1_cap_upper(w, space, cond),
        exact_spherical=exact_spherical_cap(space, cond),
        variational=var,
        grid_points=grid_points,
    )
