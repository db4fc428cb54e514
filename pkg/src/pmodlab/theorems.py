"""Constant chain and executable checkers for the distortion lower bounds.

Limits at the origin are replaced by finite ladders of radii: a supremum or
infimum over the ladder plus a fitted log-log exponent.  Every built-in
fixture is an exact power law, so the exponents are sharp and the slope
tolerance only absorbs quadrature noise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distortion import k_ip
from .radial import RadialMap, identity_profile, power_profile, scaled_profile, theorem3_theta
from .space import SpaceParams
from .trend import SLOPE_TOL, loglog_slope
from .weights import (
    DEFAULT_DELTAS,
    DEFAULT_LADDER,
    INF,
    EpsLadder,
    WeightField,
    alpha_integrability,
    ball_average,
    constant,
    from_map,
    q0_estimate,
    rescale_weight,
)

PASS, FAIL, NA = "pass", "fail", "not-applicable"

CHAIN_DERIVATION = (
    "box density on A(0,eps,2eps): cap_p f(E) <= eps^-p * int_{B(0,2eps)} Q; "
    "capacity lower bound with m(f(B(0,r))) -> 0: cap_p f(E) >= c * m(f(B(0,2eps)))^((n-p)/n); "
    "hence m(f(B(0,2eps))) >= (c^-1 eps^-p int Q)^(n/(n-p)); writing int Q = 2^n Omega_n eps^n * avg "
    "and dividing by 2^n Omega_n eps^n gives c1 = (2^n Omega_n)^(p/(n-p)) * c^(n/(p-n)); "
    "L_f(2eps)/(2eps) >= (m/(Omega_n (2eps)^n))^(1/n) gives c0 = c1^(1/n)"
)


@dataclass(frozen=True)
class ConstantChain:
    c: float
    c1: float
    c0: float

    def as_dict(self) -> dict:
        return {"c": self.c, "c1": self.c1, "c0": self.c0, "derivation": CHAIN_DERIVATION}


def constant_chain(space: SpaceParams) -> ConstantChain:
    """c = n^(1/(1-p)) Omega_n^(p/(n(1-p))) (p-1)/(p-n), then c1 and c0."""
    n, p = space.n, space.p
    if not p > n:
        raise ValueError("constant chain needs p > n")
    om = space.omega_n
    c = n ** (1 / (1 - p)) * om ** (p / (n * (1 - p))) * (p - 1) / (p - n)
    c1 = (2 ** n * om) ** (p / (n - p)) * c ** (n / (p - n))
    return ConstantChain(c, c1, c1 ** (1 / n))


@dataclass
class CheckReport:
    name: str
    inputs: dict
    quantities: list = field(default_factory=list)
    verdict: str = FAIL
    trend: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    subreports: list = field(default_factory=list)

    def add(self, label: str, value) -> None:
        self.quantities.append((label, value))

    def get(self, label: str):
        for k, v in self.quantities:
            if k == label:
                return v
        raise KeyError(label)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "quantities": [[k, v] for k, v in self.quantities],
            "verdict": self.verdict,
            "trend": self.trend,
            "flags": list(self.flags),
            "subreports": [s.as_dict() for s in self.subreports],
        }


def _space_dict(space: SpaceParams) -> dict:
    return {"n": space.n, "p": space.p}


def _ladder_radii(ladder: EpsLadder, factor: float = 1.0) -> list:
    radii = [factor * e for e in ladder]
    if any(r >= 1.0 for r in radii):
        raise ValueError(f"ladder radii times {factor:g} must stay below 1")
    return radii


def _map_ratio_slope(fmap: RadialMap, radii, exponent: float = 1.0):
    """|f(x)| / |x|^exponent along a ray, and its log-log slope."""
    n = fmap.space.n
    vals = []
    for r in radii:
        x = np.zeros(n)
        x[0] = r
        vals.append(float(np.linalg.norm(fmap.eval(x))) / r ** exponent)
    return vals, loglog_slope(radii, vals)


def corollary1_check(fmap: RadialMap, space: SpaceParams,
                     ladder: EpsLadder = DEFAULT_LADDER, tol: float = SLOPE_TOL) -> CheckReport:
    """Q0 = 0 for the map's own distortion weight forces |f(x)|/|x| -> inf."""
    rep = CheckReport("cor1", {"space": _space_dict(space), "map": fmap.profile.describe(),
                               "ladder": list(ladder)})
    q = q0_estimate(from_map(fmap), space, ladder)
    rep.add("q0_value", q.value)
    rep.add("q0_trend", q.trend)
    rep.trend["q0_trend"] = q.trend
    if q.limit != "zero":
        rep.verdict = NA
        rep.flags.append(f"precondition: Q0 of the distortion weight is {q.limit}, not zero")
        return rep
    radii = list(ladder)
    ratios, slope = _map_ratio_slope(fmap, radii)
    rep.add("ratios", ratios)
    rep.add("ratio_slope", slope)
    rep.trend["ratio_slope"] = slope
    rep.verdict = PASS if slope < -tol else FAIL
    return rep


def theorem1_check(fmap: RadialMap, w: WeightField, space: SpaceParams,
                   ladder: EpsLadder = DEFAULT_LADDER, tol: float = SLOPE_TOL) -> CheckReport:
    """limsup |f(x)|/|x| >= c0 Q0^(1/(n-p)) on a ladder of radii."""
    rep = CheckReport("thm1", {"space": _space_dict(space), "map": fmap.profile.describe(),
                               "weight": w.describe(), "ladder": list(ladder)})
    chain = constant_chain(space)
    rep.add("c0", chain.c0)
    q = q0_estimate(w, space, ladder)
    rep.add("q0_value", q.value)
    rep.add("q0_trend", q.trend)
    rep.add("q0_limit", q.limit)
    rep.trend["q0_trend"] = q.trend
    if q.limit == "divergent":
        rep.verdict = NA
        rep.flags.append("precondition: ball integral of Q diverges")
        return rep
    radii = _ladder_radii(ladder, 2.0)
    ratios = [fmap.lf_max(r) / r for r in radii]
    observed = max(ratios)
    rep.add("observed_ratio", observed)
    rep.trend["ratio_slope"] = loglog_slope(radii, ratios)
    n, p = space.n, space.p
    if q.limit == "zero":
        rep.add("bound", INF)
        rep.flags.append("Q0 = 0: bound is infinite, deferred to cor1")
        sub = corollary1_check(fmap, space, ladder, tol)
        rep.subreports.append(sub)
        rep.verdict = sub.verdict
        return rep
    if q.limit == "infinite":
        rep.add("bound", 0.0)
        rep.flags.append("vacuous: Q0 = inf makes the bound 0")
        rep.verdict = PASS
        return rep
    bound = chain.c0 * q.value ** (1.0 / (n - p))
    rep.add("bound", bound)
    rep.verdict = PASS if observed >= bound else FAIL
    return rep


@dataclass(frozen=True)
class Rescaled:
    fmap: RadialMap
    weight: WeightField
    report: CheckReport


def corollary2_rescale(fmap: RadialMap, w: WeightField, space: SpaceParams, r: float,
                       ladder: EpsLadder = DEFAULT_LADDER, rtol: float = 1e-9) -> Rescaled:
    """Rescale to y -> f(r y) with weight r^(n-p) Q(r y) and verify that the
    ball averages (hence Q0) pick up exactly the factor r^(n-p)."""
    if not 0.0 < r <= 1.0:
        raise ValueError(f"scale must lie in (0, 1], got {r}")
    new_map = RadialMap(fmap.space, scaled_profile(fmap.profile, r))
    new_w = rescale_weight(w, space, r)
    rep = CheckReport("cor2", {"space": _space_dict(space), "map": fmap.profile.describe(),
                               "weight": w.describe(), "scale": r, "ladder": list(ladder)})
    factor = r ** (space.n - space.p)
    rep.add("factor", factor)
    rep.add("rescaled_weight", new_w.describe())
    worst = 0.0
    for e in ladder:
        lhs = ball_average(new_w, space, e)
        rhs = factor * ball_average(w, space, r * e)
        if lhs == rhs:
            continue
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            worst = INF
            continue
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    rep.add("covariance_rel_err", worst)
    q_new = q0_estimate(new_w, space, ladder)
    q_old = q0_estimate(w, space, EpsLadder(tuple(r * e for e in ladder)) if r < 1 else ladder)
    rep.add("q0_rescaled", q_new.value)
    rep.add("q0_scaled_original", factor * q_old.value)
    rep.trend["q0_trend_rescaled"] = q_new.trend
    rep.trend["q0_trend_original"] = q_old.trend
    before = theorem1_check(fmap, w, space, ladder)
    after = theorem1_check(new_map, new_w, space, ladder)
    rep.subreports.extend([before, after])
    same = before.verdict == after.verdict
    rep.add("thm1_verdict_original", before.verdict)
    rep.add("thm1_verdict_rescaled", after.verdict)
    ok = worst <= rtol and q_new.limit == q_old.limit and same
    rep.verdict = PASS if ok else FAIL
    return Rescaled(new_map, new_w, rep)


def theorem2_target_exponent(space: SpaceParams, alpha: float) -> float:
    return 1.0 + space.n / (alpha * (space.p - space.n))


def theorem2_check(fmap: RadialMap, space: SpaceParams, alpha: float,
                   ladder: EpsLadder = DEFAULT_LADDER, compact_radius: float = 0.5,
                   deltas=DEFAULT_DELTAS, tol: float = SLOPE_TOL) -> CheckReport:
    """|f(x)| / |x|^(1 + n/(alpha(p-n))) stays bounded below when K in L^alpha."""
    rep = CheckReport("thm2", {"space": _space_dict(space), "map": fmap.profile.describe(),
                               "alpha": alpha, "ladder": list(ladder),
                               "compact_radius": compact_radius})
    diag = alpha_integrability(from_map(fmap), space, alpha, compact_radius, deltas)
    rep.add("alpha_partials", list(diag.partials))
    rep.add("alpha_shell_slope", diag.slope)
    rep.trend["alpha_shell_slope"] = diag.slope
    if not diag.integrable:
        rep.verdict = NA
        rep.flags.append("precondition: distortion weight not in L^alpha near 0; see thm3")
        return rep
    expo = theorem2_target_exponent(space, alpha)
    rep.add("target_exponent", expo)
    ratios, slope = _map_ratio_slope(fmap, list(ladder), expo)
    rep.add("ratios", ratios)
    rep.add("ratio_inf", min(ratios))
    rep.add("ratio_slope", slope)
    rep.trend["ratio_slope"] = slope
    # a positive slope in log r means decay as r -> 0
    rep.verdict = PASS if min(ratios) > 0 and slope <= tol else FAIL
    return rep


THM3_RADII = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


def theorem3_weight_law(space: SpaceParams, alpha: float, eps: float) -> tuple[float, float]:
    """(C, s) with K_{I,p} = C |x|^s for the counterexample map."""
    n, p = space.n, space.p
    return n / (alpha * (p - n)) + eps + 1.0, -n / alpha + eps * (n - p)


def theorem3_counterexample(space: SpaceParams, alpha: float, eps: float, eps0: float = 0.5,
                            deltas=DEFAULT_DELTAS, radii=THM3_RADII) -> tuple[RadialMap, CheckReport]:
    """Build f(x) = x |x|^(n/(alpha(p-n)) + eps) and confirm that its distortion
    leaves L^alpha while |f(x)| / |x|^(1 + n/(alpha(p-n))) -> 0."""
    theta = theorem3_theta(space, alpha, eps)
    fmap = RadialMap(space, power_profile(theta))
    rep = CheckReport("thm3", {"space": _space_dict(space), "alpha": alpha, "eps": eps,
                               "eps0": eps0, "deltas": list(deltas), "radii": list(radii)})
    n, p = space.n, space.p
    C, s = theorem3_weight_law(space, alpha, eps)
    rep.add("theta", theta)
    rep.add("C", C)
    rep.add("k_exponent", s)
    expo = theorem2_target_exponent(space, alpha)
    rep.add("target_exponent", expo)
    rep.add("exponent_identity_gap", abs(expo - (theta - eps)))

    # (a) pointwise distortion against the closed form
    k_err = max(abs(k_ip(fmap, r) - C * r ** s) / (C * r ** s) for r in (0.5,) + tuple(radii))
    rep.add("k_max_rel_err", k_err)
    ok_a = k_err <= 1e-9

    # (b) partial alpha-integrals grow like delta^(alpha eps (n-p))
    w = from_map(fmap)
    diag = alpha_integrability(w, space, alpha, eps0, deltas)
    expected_slope = alpha * eps * (n - p)
    k = n + alpha * s
    scale = space.omega_sphere * C ** alpha
    core = [(eps0 ** k - d ** k) / k for d in deltas]
    core_err = max(abs(v / scale - c) / c for v, c in zip(diag.partials, core))
    rep.add("alpha_partials", list(diag.partials))
    rep.add("alpha_core_closed_form", core)
    rep.add("alpha_core_rel_err", core_err)
    rep.add("alpha_shell_slope", diag.slope)
    rep.add("alpha_expected_slope", expected_slope)
    slope_err = abs(diag.slope - expected_slope) / abs(expected_slope)
    rep.add("alpha_slope_rel_err", slope_err)
    rep.trend["alpha_shell_slope"] = diag.slope
    ok_b = (not diag.integrable) and slope_err <= SLOPE_TOL and core_err <= 1e-6

    # (c) the theorem-2 ratio decays like |x|^eps
    ratios, slope = _map_ratio_slope(fmap, list(radii), expo)
    rep.add("ratios", ratios)
    rep.add("ratio_slope", slope)
    rep.trend["ratio_slope"] = slope
    ok_c = abs(slope - eps) <= 1e-6 and all(b < a for a, b in zip(ratios, ratios[1:]))

    rep.add("subchecks", {"distortion": ok_a, "divergence": ok_b, "decay": ok_c})
    rep.verdict = PASS if ok_a and ok_b and ok_c else FAIL
    return fmap, rep


# fixture suite ------------------------------------------------------------

def _fixture_list():
    s23 = SpaceParams(2, 3)
    s24 = SpaceParams(2, 4)
    ident = RadialMap(s23, identity_profile())
    half = RadialMap(s24, power_profile(0.5))
    nine = RadialMap(s24, power_profile(0.9))
    t3 = RadialMap(s23, power_profile(theorem3_theta(s23, 2.0, 0.1)))
    fx = []
    for q in (0.25, 1.0, 4.0):
        fx.append((f"thm1/identity/Q={q:g}", PASS,
                   lambda q=q: theorem1_check(ident, constant(q), s23)))
    fx.append(("thm1/theta=0.5/from_map", PASS,
               lambda: theorem1_check(half, from_map(half), s24)))
    fx.append(("thm1/theorem3-map/from_map", PASS,
               lambda: theorem1_check(t3, from_map(t3), s23)))
    fx.append(("cor1/theta=0.5", PASS, lambda: corollary1_check(half, s24)))
    fx.append(("cor1/theta=0.9", PASS, lambda: corollary1_check(nine, s24)))
    fx.append(("cor1/identity", NA, lambda: corollary1_check(ident, s23)))
    fx.append(("cor2/identity/Q=1/r=0.5", PASS,
               lambda: corollary2_rescale(ident, constant(1.0), s23, 0.5).report))
    fx.append(("cor2/theta=0.5/from_map/r=0.5", PASS,
               lambda: corollary2_rescale(half, from_map(half), s24, 0.5).report))
    fx.append(("thm2/identity/alpha=2", PASS, lambda: theorem2_check(ident, s23, 2.0)))
    fx.append(("thm2/theta=0.5/alpha=1.1", PASS, lambda: theorem2_check(half, s24, 1.1)))
    fx.append(("thm2/theorem3-map/alpha=2", NA, lambda: theorem2_check(t3, s23, 2.0)))
    for n, p in ((2, 3), (3, 5)):
        sp = SpaceParams(n, p)
        for a in (1.5, 2.0, 4.0):
            for e in (0.05, 0.1, 0.5):
                fx.append((f"thm3/n={n}/p={p:g}/alpha={a:g}/eps={e:g}", PASS,
                           lambda sp=sp, a=a, e=e: theorem3_counterexample(sp, a, e)[1]))
    return fx


def fixture_names() -> list:
    return [name for name, _, _ in _fixture_list()]


def run_fixture_suite():
    """Run every built-in fixture in a fixed order.

    Returns a list of (fixture name, expected verdict, report).
    """
    return [(name, expected, build()) for name, expected, build in _fixture_list()]
