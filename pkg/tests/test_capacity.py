import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate

from pmodlab.capacity import (
    SphericalCondenser,
    capacity_bounds,
    cell_coefficients,
    eta0,
    eta0_mass,
    exact_spherical_cap,
    lemma1_cap_upper,
    mazya_cap_lower,
    radial_grid,
    ring_box_bound,
    variational_cap,
    variational_solve,
    weighted_ring_integral,
)
from pmodlab.radial import RadialMap, power_profile
from pmodlab.space import SpaceParams
from pmodlab.weights import WeightField, constant, from_map, radial_power

S23, S24, S34 = SpaceParams(2, 3), SpaceParams(2, 4), SpaceParams(3, 4)
ONE = constant(1.0)


def test_ring_integral_examples():
    assert weighted_ring_integral(ONE, S23, 0.1, 0.4) == pytest.approx(2 * (math.sqrt(0.4) - math.sqrt(0.1)), rel=1e-14)
    assert weighted_ring_integral(ONE, S23, 0.1, 0.4) == pytest.approx(0.6324555, abs=1e-7)
    assert weighted_ring_integral(radial_power(1.0, 1.0), S23, 0.1, 0.4) == pytest.approx(math.log(4), rel=1e-14)
    assert weighted_ring_integral(ONE, S23, 0.4 - 1e-12, 0.4) < 1e-11


@pytest.mark.parametrize("w", [ONE, radial_power(2.5, 1.0), radial_power(0.3, -0.7),
                               from_map(RadialMap(S23, power_profile(0.6)))])
def test_ring_integral_closed_vs_quadrature(w):
    a = weighted_ring_integral(w, S23, 0.05, 0.7)
    b = weighted_ring_integral(w, S23, 0.05, 0.7, method="quadrature")
    oracle, _ = integrate.quad(lambda r: r ** -0.5 * w.at_radius(r) ** -0.5, 0.05, 0.7, epsabs=0, epsrel=1e-13)
    assert b == pytest.approx(a, rel=1e-10)
    assert a == pytest.approx(oracle, rel=1e-10)


def test_ring_integral_zero_weight_is_infinite():
    assert weighted_ring_integral(constant(0.0), S23, 0.1, 0.4) == math.inf
    assert lemma1_cap_upper(constant(0.0), S23, SphericalCondenser(0.1, 0.4)) == 0.0
    gap = WeightField("radial", fn=lambda r: np.where(np.asarray(r) < 0.2, 0.0, 1.0))
    assert weighted_ring_integral(gap, S23, 0.1, 0.4) == math.inf


def test_eta0_example():
    # 1 / (I sqrt(0.2)) with I = 2 (sqrt 0.4 - sqrt 0.1)
    I = weighted_ring_integral(ONE, S23, 0.1, 0.4)
    assert eta0(ONE, S23, 0.1, 0.4, 0.2) == pytest.approx(1 / (I * math.sqrt(0.2)), rel=1e-14)
    assert eta0(ONE, S23, 0.1, 0.4, 0.2) == pytest.approx(3.5355339, abs=1e-6)


@pytest.mark.parametrize("w", [ONE, constant(7.0), radial_power(2.0, -0.5)])
def test_eta0_is_admissible(w):
    assert eta0_mass(w, S23, 0.1, 0.4) == pytest.approx(1.0, rel=1e-10)


def test_eta0_invariant_under_constant_scaling():
    for r in (0.15, 0.3):
        assert eta0(constant(3.0), S23, 0.1, 0.4, r) == pytest.approx(eta0(ONE, S23, 0.1, 0.4, r), rel=1e-13)


def test_eta0_rejects_radius_outside_ring():
    with pytest.raises(ValueError):
        eta0(ONE, S23, 0.1, 0.4, 0.5)


def test_lemma1_examples():
    assert lemma1_cap_upper(ONE, S23, SphericalCondenser(0.1, 0.4)) == pytest.approx(15.708, abs=1e-3)
    assert lemma1_cap_upper(ONE, S23, SphericalCondenser(1.0, 4.0)) == pytest.approx(math.pi / 2, rel=1e-14)
    assert lemma1_cap_upper(ONE, S23, SphericalCondenser(0.4 - 1e-12, 0.4)) > 1e20


def test_mazya_examples():
    assert mazya_cap_lower(S23, 16 * math.pi, math.pi) == pytest.approx(math.pi / 2, rel=1e-13)
    assert mazya_cap_lower(S23, 4 * math.pi, math.pi) == pytest.approx(9.155, abs=1e-3)
    assert mazya_cap_lower(S23, math.pi + 1e-13, math.pi) > 1e20
    with pytest.raises(ValueError):
        mazya_cap_lower(S23, math.pi, math.pi)


def test_exact_examples():
    assert exact_spherical_cap(S23, SphericalCondenser(1, 4)) == pytest.approx(math.pi / 2, rel=1e-14)
    assert exact_spherical_cap(S23, SphericalCondenser(1, 2)) == pytest.approx(9.155, abs=1e-3)
    assert exact_spherical_cap(S23, SphericalCondenser(1, 1 + 1e-13)) > 1e20


@pytest.mark.parametrize("space, ring", [(S23, (1, 4)), (S23, (1, 2)), (S34, (1, 2)), (SpaceParams(3, 7), (0.2, 0.9))])
def test_variational_matches_exact(space, ring):
    cond = SphericalCondenser(*ring)
    exact = exact_spherical_cap(space, cond)
    v = variational_cap(space, cond, 4096)
    assert exact <= v <= exact * (1 + 1e-3)


def test_variational_monotone_under_refinement():
    cond = SphericalCondenser(1, 4)
    vals = [variational_cap(S23, cond, g) for g in (256, 1024, 4096)]
    assert vals[0] > vals[1] > vals[2] > math.pi / 2


def test_variational_matches_discrete_oracle():
    # radial minimiser of sum a_i |d_i|^p with sum d_i = 1: d_i ∝ a_i^(-1/(p-1))
    for space in (S23, SpaceParams(2, 5.5)):
        cond = SphericalCondenser(0.3, 0.8)
        a = cell_coefficients(space, radial_grid(cond, 512))
        oracle = np.sum(a ** (-1 / (space.p - 1))) ** (1 - space.p)
        res = variational_solve(space, cond, 512)
        assert res.energy == pytest.approx(oracle, rel=1e-10)
        assert res.profile[0] == 1.0 and res.profile[-1] == 0.0
        assert np.all(np.diff(res.profile) < 0)


def test_grids_nest():
    cond = SphericalCondenser(1, 4)
    coarse, fine = radial_grid(cond, 256), radial_grid(cond, 1024)
    np.testing.assert_allclose(fine[::4], coarse, rtol=1e-14)


def test_variational_rejects_tiny_grid():
    with pytest.raises(ValueError):
        variational_cap(S23, SphericalCondenser(1, 4), 8)


def test_box_bound_examples():
    assert ring_box_bound(ONE, S23, 0.1) == pytest.approx(30 * math.pi, rel=1e-12)
    assert ring_box_bound(ONE, S23, 0.05) == pytest.approx(60 * math.pi, rel=1e-12)
    sqrt_map = RadialMap(S24, power_profile(0.5))
    assert ring_box_bound(from_map(sqrt_map), S24, 0.1) == pytest.approx(1172.86, abs=0.01)
    with pytest.raises(ValueError):
        ring_box_bound(ONE, S23, 0.5)


def test_capacity_bounds_bundle():
    b = capacity_bounds(S23, SphericalCondenser(1, 4), grid_points=1024)
    assert b.lower_mazya == pytest.approx(math.pi / 2, rel=1e-12)
    assert b.exact_spherical == pytest.approx(math.pi / 2, rel=1e-12)
    assert b.upper_lemma1 == pytest.approx(math.pi / 2, rel=1e-12)
    assert b.variational >= b.exact_spherical
    assert capacity_bounds(S23, SphericalCondenser(1, 4), grid_points=None).variational is None


def test_condenser_validation():
    for bad in [(0, 1), (2, 1), (1, 1), (1, math.inf)]:
        with pytest.raises(ValueError):
            SphericalCondenser(*bad)


spaces = st.sampled_from([(2, 2.5), (2, 3.0), (2, 6.0), (3, 3.5), (3, 5.0), (4, 9.0)])


@settings(max_examples=80, deadline=None)
@given(np_=spaces, r1=st.floats(0.01, 0.9), ratio=st.floats(1.05, 50.0))
def test_concentric_balls_are_sharp(np_, r1, ratio):
    sp = SpaceParams(*np_)
    cond = SphericalCondenser(r1, r1 * ratio)
    mA, mC = cond.measures(sp)
    exact = exact_spherical_cap(sp, cond)
    assert mazya_cap_lower(sp, mA, mC) == pytest.approx(exact, rel=1e-9)
    assert lemma1_cap_upper(ONE, sp, cond) == pytest.approx(exact, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(np_=spaces, C=st.floats(0.01, 100.0), s=st.floats(-2.0, 3.0),
       r1=st.floats(0.01, 0.5), ratio=st.floats(1.1, 1.9))
def test_capacity_ordering(np_, C, s, r1, ratio):
    sp = SpaceParams(*np_)
    cond = SphericalCondenser(r1, r1 * ratio)
    mA, mC = cond.measures(sp)
    assert mazya_cap_lower(sp, mA, mC) <= exact_spherical_cap(sp, cond) * (1 + 1e-9)
    w = radial_power(C, s)
    # the box bound dominates the extremal-density bound on the ring (eps, 2 eps)
    eps = min(r1, 0.49)
    upper = lemma1_cap_upper(w, sp, SphericalCondenser(eps, 2 * eps))
    assert ring_box_bound(w, sp, eps) >= upper * (1 - 1e-9)


@settings(max_examples=40, deadline=None)
@given(np_=spaces, lam=st.floats(0.05, 20.0), r1=st.floats(0.01, 0.5), ratio=st.floats(1.1, 10.0))
def test_lemma1_scales_with_weight(np_, lam, r1, ratio):
    sp = SpaceParams(*np_)
    cond = SphericalCondenser(r1, r1 * ratio)
    assume(ratio * r1 < 10)
    assert lemma1_cap_upper(constant(lam), sp, cond) == pytest.approx(lam * lemma1_cap_upper(ONE, sp, cond), rel=1e-10)
