"""Numerical toolkit for rotation-congruent projections of convex bodies in R^3."""

from .bodies import (
    ConvexBody,
    Polygon2,
    Polytope,
    Reflected,
    Rotated,
    SupportSeries,
    constant_width_harmonic,
    polar_polygon_radial,
    projection_polygon,
    random_polytope,
    reflect,
    rotated,
    validate_origin_interior,
)
from .congruence import ClassifyParams, CircularProfile, classify_direction, match_rotations, profile, residual_at
from .geometry import AxisRotation, GreatCircleFrame, SphereGrid, circle_point, fibonacci_grid, frame_for, rotate
from .quartic import real_quartic_roots, solve_width_tau_system
from .radon import dual_section_area, radon_transform, tau_difference_check
from .sphere import (
    HypothesisViolatedError,
    constant_tau_test,
    constant_width_test,
    decompose_sphere,
    orbit_covering_radius,
    verify_theorem,
)

__version__ = "0.1.0"
