"""Vector kernel: unit vectors, Rodrigues rotations, great-circle frames, sphere grids.

Directions are plain ``numpy`` arrays of shape ``(3,)`` (or ``(..., 3)`` for
batches).  Rotation amounts are given as a fraction ``r`` of pi, so that
``AxisRotation(axis, r)`` turns space by ``r * pi`` radians counterclockwise
about ``axis``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

UNIT_TOL = 1e-9
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def as_unit(v, tol: float = UNIT_TOL) -> np.ndarray:
    """Return ``v`` as a float array, raising ``ValueError`` unless every row has norm 1."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != 3:
        raise ValueError(f"expected 3-vectors, got shape {v.shape}")
    dev = np.abs(np.linalg.norm(v, axis=-1) - 1.0)
    if np.any(dev > tol):
        raise ValueError(f"non-unit direction (norm deviation {np.max(dev):.3e})")
    return v


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n == 0.0):
        raise ValueError("cannot normalize the zero vector")
    return v / n


def canonical_fraction(r: float) -> float:
    """Reduce a rotation fraction into ``[0, 2)``."""
    r = math.fmod(float(r), 2.0)
    if r < 0.0:
        r += 2.0
    # fmod of a tiny negative can round back up to exactly 2.0
    return 0.0 if r >= 2.0 else r


def folded_fraction(r: float) -> float:
    """Fold a fraction onto ``[0, 1]``: a turn by ``r*pi`` one way is ``(2-r)*pi`` the other."""
    r = canonical_fraction(r)
    return min(r, 2.0 - r)


def rotate(axis, fraction: float, x) -> np.ndarray:
    """Rotate ``x`` by ``fraction * pi`` about ``axis`` using Rodrigues' formula.

    ``x`` may be a single vector or an ``(..., 3)`` batch.
    """
    axis = as_unit(axis)
    if not math.isfinite(fraction):
        raise ValueError("rotation fraction must be finite")
    x = np.asarray(x, dtype=float)
    angle = math.pi * canonical_fraction(fraction)
    c, s = math.cos(angle), math.sin(angle)
    along = x @ axis
    return x * c + np.cross(axis, x) * s + np.multiply.outer(along, axis) * (1.0 - c)


@dataclass(frozen=True)
class AxisRotation:
    axis: np.ndarray
    fraction: float

    def __post_init__(self):
        object.__setattr__(self, "axis", as_unit(self.axis).copy())
        object.__setattr__(self, "fraction", canonical_fraction(self.fraction))

    @property
    def angle(self) -> float:
        return math.pi * self.fraction

    def apply(self, x) -> np.ndarray:
        return rotate(self.axis, self.fraction, x)

    def inverse(self) -> AxisRotation:
        return AxisRotation(self.axis, -self.fraction)

    def matrix(self) -> np.ndarray:
        # columns are images of the standard basis
        return self.apply(np.eye(3)).T


@dataclass(frozen=True)
class GreatCircleFrame:
    """Right-handed orthonormal frame ``(e1, e2, pole)`` charting the circle orthogonal to ``pole``."""

    pole: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    def point(self, t) -> np.ndarray:
        return circle_point(self, t)

    def to_plane(self, x) -> np.ndarray:
        """Coordinates of ``x`` (projected onto the plane) in the ``(e1, e2)`` basis."""
        x = np.asarray(x, dtype=float)
        return np.stack([x @ self.e1, x @ self.e2], axis=-1)

    def same_as(self, other: GreatCircleFrame, tol: float = 1e-12) -> bool:
        return all(
            np.allclose(a, b, rtol=0.0, atol=tol)
            for a, b in ((self.pole, other.pole), (self.e1, other.e1), (self.e2, other.e2))
        )


def frame_for(pole) -> GreatCircleFrame:
    """Deterministic chart of the great circle orthogonal to ``pole``.

    The helper axis is the standard basis vector along which ``pole`` has the
    smallest absolute component (first index wins ties).
    """
    pole = as_unit(pole)
    if pole.ndim != 1:
        raise ValueError("frame_for expects a single pole")
    a = np.zeros(3)
    a[int(np.argmin(np.abs(pole)))] = 1.0
    e1 = normalize(np.cross(a, pole))
    e2 = np.cross(pole, e1)
    return GreatCircleFrame(pole.copy(), e1, e2)


def circle_point(frame: GreatCircleFrame, t) -> np.ndarray:
    """``cos(t) e1 + sin(t) e2``; ``t`` may be an array, giving shape ``t.shape + (3,)``."""
    t = np.asarray(t, dtype=float)
    return np.multiply.outer(np.cos(t), frame.e1) + np.multiply.outer(np.sin(t), frame.e2)


def circle_angles(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


@dataclass(frozen=True, eq=False)
class SphereGrid:
    directions: np.ndarray
    antipodal: bool = False
    dedup_tol: float = field(default=1e-9, repr=False)

    def __post_init__(self):
        d = as_unit(np.atleast_2d(np.asarray(self.directions, dtype=float)))
        d.setflags(write=False)
        object.__setattr__(self, "directions", d)

    def __len__(self) -> int:
        return len(self.directions)

    def __iter__(self):
        return iter(self.directions)

    @cached_property
    def antipode_index(self) -> np.ndarray:
        """``antipode_index[i] = j`` with ``directions[j] == -directions[i]``, or ``-1`` if absent."""
        dist, idx = cKDTree(self.directions).query(-self.directions)
        # chord length ~ angle at this scale
        return np.where(dist <= 1e-12 + self.dedup_tol, idx, -1)


def _dedup(points: np.ndarray, tol: float) -> np.ndarray:
    tree = cKDTree(points)
    keep = np.ones(len(points), dtype=bool)
    for i, j in sorted(tree.query_pairs(tol)):
        if keep[i]:
            keep[j] = False
    return points[keep]


def fibonacci_points(n: int) -> np.ndarray:
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    rho = np.sqrt(1.0 - z * z)
    phi = i * GOLDEN_ANGLE
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)


def fibonacci_grid(n: int, antipodal: bool = True, tol: float = 1e-9) -> SphereGrid:
    """Fibonacci spiral lattice of ``n`` points, optionally closed under ``u -> -u``.

    The antipodal grid lists the ``n`` lattice points first and then their
    antipodes in the same order (entries closer than ``tol`` are dropped).
    """
    if n < 2:
        raise ValueError("fibonacci_grid needs n >= 2")
    pts = fibonacci_points(n)
    if antipodal:
        pts = np.concatenate([pts, -pts])
    return SphereGrid(_dedup(pts, tol), antipodal=antipodal, dedup_tol=tol)


def nearest_neighbor_angles(directions: np.ndarray) -> np.ndarray:
    """Angle from each direction to its closest distinct neighbour."""
    dist, _ = cKDTree(directions).query(directions, k=2)
    chord = dist[:, 1]
    return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))
