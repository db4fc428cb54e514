"""Numerical laboratory for capacity bounds and distance-distortion estimates
of ring Q-mappings with respect to the p-modulus, p > n."""

from .capacity import (
    CapacityBounds,
    SphericalCondenser,
    capacity_bounds,
    eta0,
    exact_spherical_cap,
    lemma1_cap_upper,
    mazya_cap_lower,
    ring_box_bound,
    variational_cap,
    weighted_ring_integral,
)
from .distortion import StretchData, fd_check, k_ip, stretches
from .radial import RadialMap, RadialProfile, lower_radius_from_measure, power_profile
from .space import SpaceParams, unit_ball_volume, unit_sphere_area
from .theorems import (
    CheckReport,
    ConstantChain,
    constant_chain,
    corollary1_check,
    corollary2_rescale,
    theorem1_check,
    theorem2_check,
    theorem3_counterexample,
)
from .weights import (
    EpsLadder,
    WeightField,
    alpha_norm_on_annulus,
    ball_average,
    ball_integral,
    q0_estimate,
    spherical_mean,
)

__version__ = "0.1.0"
