import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from pmodlab.radial import RadialMap, custom_profile, power_profile
from pmodlab.space import SpaceParams
from pmodlab.weights import (
    DEFAULT_LADDER,
    EpsLadder,
    WeightField,
    alpha_integrability,
    alpha_norm_on_annulus,
    annulus_integral,
    ball_average,
    ball_integral,
    constant,
    from_map,
    make_weight,
    q0_estimate,
    radial_power,
    rescale_weight,
    spherical_mean,
)

S23, S24 = SpaceParams(2, 3), SpaceParams(2, 4)
SQRT_MAP = RadialMap(S24, power_profile(0.5))
THM3_MAP = RadialMap(S23, power_profile(2.1))


def test_spherical_mean_examples():
    assert spherical_mean(constant(1.0), S23, 0.7) == 1.0
    assert spherical_mean(radial_power(1.0, 2.0), S23, 0.3) == pytest.approx(0.09, rel=1e-14)
    assert spherical_mean(from_map(SQRT_MAP), S24, 0.25) == pytest.approx(2.0, rel=1e-12)


def test_spherical_mean_matches_sphere_quadrature():
    # a non-radial description of the same weight, averaged over the circle
    w = radial_power(3.0, -0.4)
    r = 0.37
    direct, _ = integrate.quad(lambda t: 3.0 * math.hypot(r * math.cos(t), r * math.sin(t)) ** -0.4,
                               0.0, 2 * math.pi)
    assert spherical_mean(w, S23, r) == pytest.approx(direct / (2 * math.pi), rel=1e-12)


def test_ball_integral_examples():
    assert ball_integral(constant(1.0), S23, 0.5) == pytest.approx(math.pi / 4, rel=1e-14)
    assert ball_integral(from_map(SQRT_MAP), S24, 0.5) == pytest.approx(2 * math.pi / 3, rel=1e-12)
    assert ball_integral(radial_power(1.0, -3.0), S23, 0.5) == math.inf
    assert ball_integral(radial_power(1.0, -3.0), S23, 0.5, method="quadrature") == math.inf


@pytest.mark.parametrize("eps", [0.1, 0.3, 0.5])
def test_ball_integral_closed_form_agrees_with_quadrature(eps):
    w = from_map(SQRT_MAP)
    closed = ball_integral(w, S24, eps, method="closed")
    quad = ball_integral(w, S24, eps, method="quadrature")
    assert quad == pytest.approx(closed, rel=1e-8)
    assert closed == pytest.approx(16 * math.pi / 3 * eps ** 3, rel=1e-12)


def test_custom_weight_uses_quadrature():
    fmap = RadialMap(S23, custom_profile(lambda t: np.sin(np.asarray(t)),
                                         lambda t: np.cos(np.asarray(t))))
    w = from_map(fmap)
    assert w.power_law() is None
    oracle, _ = integrate.quad(lambda r: 2 * math.pi * r * w.at_radius(r), 0, 0.4, epsabs=0, epsrel=1e-12)
    assert ball_integral(w, S23, 0.4) == pytest.approx(oracle, rel=1e-9)
    with pytest.raises(ValueError):
        ball_integral(w, S23, 0.4, method="closed")


@pytest.mark.parametrize("eps", [0.0, 1.0, -0.1])
def test_ball_integral_rejects_radius(eps):
    with pytest.raises(ValueError):
        ball_integral(constant(1.0), S23, eps)


@pytest.mark.parametrize("eps, expected", [(0.1, 16 / 3 * 0.1), (0.05, 16 / 3 * 0.05)])
def test_ball_average_examples(eps, expected):
    assert ball_average(constant(1.0), S23, eps) == pytest.approx(1.0, rel=1e-14)
    assert ball_average(from_map(SQRT_MAP), S24, eps) == pytest.approx(expected, rel=1e-12)


def test_q0_examples():
    q = q0_estimate(constant(1.0), S23, DEFAULT_LADDER)
    assert q.value == pytest.approx(1.0) and abs(q.trend) < 1e-12 and q.limit == "finite"
    q = q0_estimate(from_map(SQRT_MAP), S24, DEFAULT_LADDER)
    assert q.value == pytest.approx(16 / 3 * 0.0125, rel=1e-12)
    assert q.trend == pytest.approx(1.0, rel=0.02) and q.limit == "zero"
    q = q0_estimate(radial_power(1.0, -1.0), S23, DEFAULT_LADDER)
    assert q.trend == pytest.approx(-1.0, rel=0.02) and q.limit == "infinite"


def test_q0_divergent_and_zero_weights():
    assert q0_estimate(radial_power(1.0, -3.0), S23).limit == "divergent"
    assert q0_estimate(constant(0.0), S23).limit == "zero"


def test_alpha_norm_examples():
    assert alpha_norm_on_annulus(constant(1.0), S23, 2.0, 0.1, 0.5) == pytest.approx(0.7539822369, rel=1e-10)
    w = from_map(THM3_MAP)
    scale = 2 * math.pi * 2.1 ** 2
    for delta, core in [(1e-5, 44.26), (1e-10, 494.26)]:
        got = alpha_norm_on_annulus(w, S23, 2.0, delta, 0.5) / scale
        exact = 5 * (delta ** -0.2 - 0.5 ** -0.2)
        assert got == pytest.approx(exact, rel=1e-12)
        assert got == pytest.approx(core, abs=0.01)


def test_alpha_norm_quadrature_oracle():
    w = from_map(THM3_MAP)
    closed = alpha_norm_on_annulus(w, S23, 2.0, 1e-5, 0.5)
    quad = alpha_norm_on_annulus(w, S23, 2.0, 1e-5, 0.5, method="quadrature")
    assert quad == pytest.approx(closed, rel=1e-9)


@pytest.mark.parametrize("alpha, delta, eps0", [(1.0, 0.1, 0.5), (2.0, 0.5, 0.5), (2.0, 0.0, 0.5)])
def test_alpha_norm_rejects(alpha, delta, eps0):
    with pytest.raises(ValueError):
        alpha_norm_on_annulus(constant(1.0), S23, alpha, delta, eps0)


def test_alpha_integrability_slopes():
    div = alpha_integrability(from_map(THM3_MAP), S23, 2.0)
    assert not div.integrable
    assert div.slope == pytest.approx(-0.2, rel=0.02)
    assert all(b > a for a, b in zip(div.partials, div.partials[1:]))
    ok = alpha_integrability(constant(1.0), S23, 2.0)
    assert ok.integrable and ok.slope == pytest.approx(2.0, rel=1e-9)


def test_ladder_validation():
    assert EpsLadder.geometric(0.1).eps_values == (0.1, 0.05, 0.025, 0.0125)
    for bad in [(0.1, 0.05), (0.1, 0.2, 0.05), (1.0, 0.5, 0.25), (0.1, 0.05, 0.0)]:
        with pytest.raises(ValueError):
            EpsLadder(bad)


def test_weight_construction():
    assert make_weight({"kind": "constant", "value": 2}).value == 2.0
    assert make_weight({"kind": "radial_power", "coeff": 2, "exp": -1}).power_law() == (2.0, -1.0)
    with pytest.raises(ValueError):
        make_weight({"kind": "from_map"})
    with pytest.raises(ValueError):
        constant(-1.0)
    with pytest.raises(ValueError):
        WeightField("mystery")


def test_rescale_examples():
    assert rescale_weight(constant(1.0), S23, 0.5).value == pytest.approx(2.0, rel=1e-15)
    assert rescale_weight(constant(1.0), S23, 1.0) == constant(1.0)
    w = rescale_weight(radial_power(3.0, 1.5), S23, 0.2)
    assert w.kind == "radial_power" and w.exp == 1.5
    assert w.coeff == pytest.approx(3.0 * 0.2 ** (-1 + 1.5), rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(r=st.floats(0.05, 1.0), eps=st.floats(0.01, 0.9),
       kind=st.sampled_from(["constant", "power", "map", "custom"]))
def test_rescale_covariance(r, eps, kind):
    base = {
        "constant": constant(1.7),
        "power": radial_power(2.0, -0.6),
        "map": from_map(RadialMap(S23, power_profile(0.7))),
        "custom": WeightField("radial", fn=lambda t: 1.0 + np.asarray(t) ** 2),
    }[kind]
    w2 = rescale_weight(base, S23, r)
    lhs = ball_average(w2, S23, eps)
    rhs = r ** (S23.n - S23.p) * ball_average(base, S23, r * eps)
    assert lhs == pytest.approx(rhs, rel=1e-8)


@settings(max_examples=50, deadline=None)
@given(C=st.floats(0.1, 10.0), s=st.floats(-1.9, 3.0), eps=st.floats(0.01, 0.9))
def test_power_ball_integral_closed_vs_quadrature(C, s, eps):
    w = radial_power(C, s)
    a = ball_integral(w, S23, eps, method="closed")
    b = ball_integral(w, S23, eps, method="quadrature")
    assert b == pytest.approx(a, rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(s=st.floats(-1.8, 3.0), a=st.floats(0.01, 0.3), b=st.floats(0.31, 0.9))
def test_annulus_additivity(s, a, b):
    w = radial_power(1.0, s)
    m = 0.5 * (a + b)
    whole = annulus_integral(w, S23, a, b)
    parts = annulus_integral(w, S23, a, m) + annulus_integral(w, S23, m, b)
    assert whole == pytest.approx(parts, rel=1e-11)
