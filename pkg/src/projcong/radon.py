"""Forward spherical (Funk) Radon transform and dual-section areas.

``(Rf)(xi)`` is the mean of ``f`` over the great circle orthogonal to
``xi``, computed by the trapezoidal rule on ``n_quad`` equally spaced
points.  The ``1/(2 pi)`` normalization makes constants fixed points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bodies import ConvexBody
from .geometry import SphereGrid, circle_angles, circle_point, frame_for


@dataclass(frozen=True, eq=False)
class SphericalFunctionSamples:
    grid: SphereGrid
    values: np.ndarray

    def symmetrized(self) -> SphericalFunctionSamples:
        """Even part: each value averaged with the value at its antipode."""
        anti = self.grid.antipode_index
        if np.any(anti < 0):
            raise ValueError("grid is not closed under antipodes")
        v = np.asarray(self.values, dtype=float)
        # IEEE addition commutes, so u and -u receive bit-identical values
        return SphericalFunctionSamples(self.grid, (v + v[anti]) / 2.0)


@dataclass(frozen=True, eq=False)
class RadonResult:
    grid: SphereGrid
    values: np.ndarray
    n_quad: int


def radon_transform(f: Callable[[np.ndarray], np.ndarray], grid: SphereGrid, n_quad: int = 512) -> RadonResult:
    """Great-circle means of ``f`` for every pole of ``grid``.

    ``f`` is called on arrays of unit vectors of shape ``(m, 3)``.
    """
    if n_quad < 64:
        raise ValueError("n_quad must be at least 64")
    t = circle_angles(n_quad)
    out = np.empty(len(grid))
    for i, pole in enumerate(grid.directions):
        out[i] = np.mean(f(circle_point(frame_for(pole), t)))
    return RadonResult(grid, out, n_quad)


def dual_section_area(K: ConvexBody, pole, n: int = 512) -> float:
    """Area of the central section of the polar body orthogonal to ``pole``."""
    if n < 64:
        raise ValueError("n must be at least 64")
    rho = K.dual_radial(circle_point(frame_for(pole), circle_angles(n)))
    return 0.5 * (2.0 * math.pi / n) * float(np.sum(rho**2))


def tau_difference_check(K: ConvexBody, L: ConvexBody, grid: SphereGrid, n_quad: int = 512) -> tuple[float, float]:
    """``(max |R(tau_K* - tau_L*)|, max |tau_K* - tau_L*|)`` over ``grid``."""
    if not grid.antipodal:
        raise ValueError("tau_difference_check needs an antipodal grid")

    def diff(u):
        return K.tau_dual(u) - L.tau_dual(u)

    radon = radon_transform(diff, grid, n_quad)
    return float(np.max(np.abs(radon.values))), float(np.max(np.abs(diff(grid.directions))))


def legendre2(u: np.ndarray) -> np.ndarray:
    """Degree-2 zonal harmonic ``u_z^2 - 1/3``; its Funk eigenvalue is ``P_2(0) = -1/2``."""
    return u[..., 2] ** 2 - 1.0 / 3.0
