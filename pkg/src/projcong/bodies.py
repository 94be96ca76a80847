"""Convex bodies represented by their support functions.

Every quantity used downstream (width, dual radial function, tau) is a
function of the support function alone, so a body only has to answer
``support(theta)`` for unit directions.  All evaluators accept batches of
directions with shape ``(..., 3)``.
"""

from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.special import lpmv

from .geometry import (
    AxisRotation,
    GreatCircleFrame,
    SphereGrid,
    as_unit,
    circle_point,
    fibonacci_grid,
    frame_for,
    normalize,
)

ORIGIN_MARGIN_REL = 1e-6
VALIDATION_GRID_SIZE = 2000


class BodyError(ValueError):
    pass


class OriginNotInteriorError(BodyError):
    pass


class DegenerateProjectionError(BodyError):
    pass


@lru_cache(maxsize=4)
def validation_grid(n: int = VALIDATION_GRID_SIZE) -> SphereGrid:
    return fibonacci_grid(n, antipodal=True)


class ConvexBody(ABC):
    """Support-function oracle ``h(theta) = max{u . theta : u in K}``."""

    @abstractmethod
    def _h(self, u: np.ndarray) -> np.ndarray:
        """Support values at unit directions ``u`` (already validated)."""

    def support(self, theta) -> np.ndarray:
        return self._h(as_unit(theta))

    def width(self, theta) -> np.ndarray:
        u = as_unit(theta)
        return (self._h(u) + self._h(-u)) / 2.0

    @cached_property
    def origin_margin(self) -> float:
        """Smallest support value still counted as 'origin interior'."""
        return ORIGIN_MARGIN_REL * float(np.max(self._h(validation_grid().directions)))

    def dual_radial(self, theta) -> np.ndarray:
        """Radial function of the polar body, ``1 / h(theta)``."""
        h = self.support(theta)
        if np.any(h <= self.origin_margin):
            raise OriginNotInteriorError(
                f"support value {np.min(h):.3e} at or below margin {self.origin_margin:.3e}"
            )
        return 1.0 / h

    def tau_dual(self, theta) -> np.ndarray:
        u = as_unit(theta)
        return (self.dual_radial(u) ** 2 + self.dual_radial(-u) ** 2) / 2.0


@dataclass(frozen=True, eq=False)
class Polytope(ConvexBody):
    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 4:
            raise BodyError("a polytope needs at least 4 vertices in R^3")
        if np.linalg.matrix_rank(v[1:] - v[0], tol=1e-12 * max(1.0, np.abs(v).max())) < 3:
            raise BodyError("polytope vertices are coplanar")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def _h(self, u):
        return np.max(u @ self.vertices.T, axis=-1)

    @cached_property
    def _hull(self) -> ConvexHull:
        return ConvexHull(self.vertices)

    def radial(self, theta) -> np.ndarray:
        """Radial function ``max{lam : lam * theta in K}`` by clipping the ray against facet halfspaces."""
        u = as_unit(theta)
        eq = self._hull.equations
        normals, offsets = eq[:, :3], eq[:, 3]
        if np.any(offsets >= 0.0):
            raise OriginNotInteriorError("origin is not interior to the polytope")
        dots = u @ normals.T
        with np.errstate(divide="ignore"):
            ts = np.where(dots > 0.0, -offsets / dots, np.inf)
        return np.min(ts, axis=-1)


def _real_sph_basis(u: np.ndarray, lmax: int) -> np.ndarray:
    """Orthonormal real spherical harmonics, ordered degree-major then order ``-l..l``.

    No Condon-Shortley phase: ``Y_l^m`` for ``m > 0`` is ``sqrt(2) N P_l^m(z) cos(m phi)``
    with ``P_l^m >= 0`` near the north pole.
    """
    x, y, z = u[..., 0], u[..., 1], np.clip(u[..., 2], -1.0, 1.0)
    phi = np.arctan2(y, x)
    out = np.empty(u.shape[:-1] + ((lmax + 1) ** 2,))
    for l in range(lmax + 1):
        for m in range(l + 1):
            norm = math.sqrt((2 * l + 1) / (4 * math.pi) * math.factorial(l - m) / math.factorial(l + m))
            p = (-1) ** m * lpmv(m, l, z)
            if m == 0:
                out[..., l * l + l] = norm * p
            else:
                out[..., l * l + l + m] = math.sqrt(2) * norm * p * np.cos(m * phi)
                out[..., l * l + l - m] = math.sqrt(2) * norm * p * np.sin(m * phi)
    return out


@dataclass(frozen=True, eq=False)
class SupportSeries(ConvexBody):
    """Support function given as a real spherical-harmonic expansion up to degree ``lmax``."""

    lmax: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if self.lmax < 0 or c.shape != ((self.lmax + 1) ** 2,):
            raise BodyError(f"expected {(self.lmax + 1) ** 2} coefficients for lmax={self.lmax}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def _h(self, u):
        return _real_sph_basis(u, self.lmax) @ self.coeffs

    @classmethod
    def zonal(cls, legendre: dict[int, float]) -> SupportSeries:
        """Body with ``h(u) = sum_l a_l P_l(u_z)``."""
        lmax = max(legendre)
        c = np.zeros((lmax + 1) ** 2)
        for l, a in legendre.items():
            c[l * l + l] = a / math.sqrt((2 * l + 1) / (4 * math.pi))
        return cls(lmax, c)

    @classmethod
    def ball(cls, radius: float = 1.0) -> SupportSeries:
        return cls.zonal({0: radius})


def constant_width_harmonic(eps: float = 0.05) -> SupportSeries:
    """``h(u) = 1 + eps * P3(u_z)``: the odd term cancels in the width, so the width is 1 everywhere."""
    return SupportSeries.zonal({0: 1.0, 3: eps})


@dataclass(frozen=True, eq=False)
class Reflected(ConvexBody):
    inner: ConvexBody

    def _h(self, u):
        return self.inner._h(-u)


@dataclass(frozen=True, eq=False)
class Rotated(ConvexBody):
    inner: ConvexBody
    rotation: AxisRotation

    def _h(self, u):
        return self.inner._h(self.rotation.inverse().apply(u))


def reflect(body: ConvexBody) -> ConvexBody:
    return Reflected(body)


def rotated(body: ConvexBody, q: AxisRotation) -> ConvexBody:
    return Rotated(body, q)


def validate_origin_interior(body: ConvexBody, grid: SphereGrid, margin: float) -> bool:
    return bool(np.min(body.support(grid.directions)) >= margin)


def series_convexity_defect(
    body: ConvexBody, seed: int = 0, circles: int = 20, samples: int = 256, step: float = 1e-3
) -> float:
    """Most negative ``h + h''`` seen along random great circles (central differences)."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    t = 2 * np.pi * np.arange(samples) / samples
    for _ in range(circles):
        frame = frame_for(normalize(rng.normal(size=3)))
        h = body.support(circle_point(frame, t))
        hp = body.support(circle_point(frame, t + step))
        hm = body.support(circle_point(frame, t - step))
        worst = min(worst, float(np.min(h + (hp - 2 * h + hm) / step**2)))
    return worst


def validate(body: ConvexBody, grid: SphereGrid | None = None) -> None:
    """Raise ``BodyError`` if the body fails the origin-interior or sampled convexity checks."""
    grid = grid if grid is not None else validation_grid()
    h = body.support(grid.directions)
    if np.min(h) < ORIGIN_MARGIN_REL * np.max(h) or np.min(h) <= 0.0:
        raise OriginNotInteriorError(f"min support {np.min(h):.3e} on the validation grid")
    if _contains_series(body):
        defect = series_convexity_defect(body)
        if defect < -1e-6:
            raise BodyError(f"support series fails the convexity check (h + h'' = {defect:.3e})")


def _contains_series(body: ConvexBody) -> bool:
    if isinstance(body, SupportSeries):
        return True
    inner = getattr(body, "inner", None)
    return inner is not None and _contains_series(inner)


class GenerationError(BodyError):
    pass


def random_polytope(m: int, rng: np.random.Generator, margin: float = 0.05, attempts: int = 100) -> Polytope:
    """``m`` vertices uniform in the unit ball, recentred on their centroid.

    Draws are rejected until the origin clears ``margin`` on the validation grid.
    """
    if m < 4:
        raise ValueError("need at least 4 vertices")
    for _ in range(attempts):
        v = rng.normal(size=(m, 3))
        v *= (rng.random(m) ** (1.0 / 3.0) / np.linalg.norm(v, axis=1))[:, None]
        v -= v.mean(axis=0)
        try:
            body = Polytope(v)
        except BodyError:
            continue
        if validate_origin_interior(body, validation_grid(), margin):
            return body
    raise GenerationError(f"no admissible polytope after {attempts} draws")


# -- planar projections and the independent polar-polygon oracle -------------


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


@dataclass(frozen=True, eq=False)
class Polygon2:
    """Convex polygon in a frame's ``(e1, e2)`` coordinates, vertices counterclockwise."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise DegenerateProjectionError("polygon needs at least 3 planar vertices")
        edges = np.roll(v, -1, axis=0) - v
        if np.any(_cross2(edges, np.roll(edges, -1, axis=0)) < 0.0):
            raise BodyError("polygon vertices are not in convex counterclockwise order")
        if np.any(_cross2(edges, -v) <= 0.0):
            raise OriginNotInteriorError("origin is not strictly inside the polygon")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def area(self) -> float:
        v = self.vertices
        return 0.5 * float(np.sum(_cross2(v, np.roll(v, -1, axis=0))))

    def support(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        d = np.stack([np.cos(t), np.sin(t)], axis=-1)
        return np.max(d @ self.vertices.T, axis=-1)

    def polar_vertices(self) -> np.ndarray:
        """Vertices of ``{x : v . x <= 1 for all vertices v}``, one per edge, counterclockwise."""
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        return np.array([np.linalg.solve(np.stack([a, b]), np.ones(2)) for a, b in zip(v, w)])


def projection_polygon(body: Polytope, frame: GreatCircleFrame) -> Polygon2:
    """Orthogonal projection of a polytope onto the plane of ``frame``."""
    if not isinstance(body, Polytope):
        raise TypeError("projection_polygon needs a Polytope")
    pts = frame.to_plane(body.vertices)
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateProjectionError(str(exc)) from exc
    if hull.volume < 1e-12:
        raise DegenerateProjectionError(f"projection area {hull.volume:.3e}")
    return Polygon2(pts[hull.vertices])


def polar_polygon_radial(poly: Polygon2, t) -> np.ndarray:
    """Radial function of the polar polygon at angle ``t``, by ray/edge intersection."""
    w = poly.polar_vertices()
    w_next = np.roll(w, -1, axis=0)
    t = np.asarray(t, dtype=float)
    flat = t.reshape(-1)
    u = np.stack([np.cos(flat), np.sin(flat)], axis=-1)
    # ray u lies in the cone spanned by consecutive polar vertices w_j, w_{j+1}
    left = _cross2(w[None, :, :], u[:, None, :]) >= 0.0
    right = _cross2(u[:, None, :], w_next[None, :, :]) >= 0.0
    j = np.argmax(left & right, axis=-1)
    a, d = w[j], w_next[j] - w[j]
    return (_cross2(a, d) / _cross2(u, d)).reshape(t.shape)


# -- JSON body files -----------------------------------------------------------


def body_to_dict(body: ConvexBody) -> dict:
    if isinstance(body, Polytope):
        return {"type": "polytope", "vertices": body.vertices.tolist()}
    if isinstance(body, SupportSeries):
        return {"type": "support_series", "lmax": body.lmax, "coeffs": body.coeffs.tolist()}
    if isinstance(body, Reflected):
        return {"type": "reflected", "of": body_to_dict(body.inner)}
    if isinstance(body, Rotated):
        return {
            "type": "rotated",
            "of": body_to_dict(body.inner),
            "axis": body.rotation.axis.tolist(),
            "fraction": body.rotation.fraction,
        }
    raise TypeError(f"cannot serialize {type(body).__name__}")


def body_from_dict(d: dict) -> ConvexBody:
    try:
        kind = d["type"]
        if kind == "polytope":
            return Polytope(np.asarray(d["vertices"], dtype=float))
        if kind == "support_series":
            return SupportSeries(int(d["lmax"]), np.asarray(d["coeffs"], dtype=float))
        if kind == "reflected":
            return Reflected(body_from_dict(d["of"]))
        if kind == "rotated":
            return Rotated(body_from_dict(d["of"]), AxisRotation(np.asarray(d["axis"]), float(d["fraction"])))
    except (KeyError, TypeError) as exc:
        raise BodyError(f"malformed body description: {exc!r}") from exc
    raise BodyError(f"unknown body type {d.get('type')!r}")


def dumps_body(body: ConvexBody) -> str:
    return json.dumps(body_to_dict(body), indent=2) + "\n"


def load_body(path) -> ConvexBody:
    with open(path, encoding="utf-8") as fh:
        return body_from_dict(json.load(fh))


def save_body(body: ConvexBody, path) -> None:
    Path(path).write_text(dumps_body(body), encoding="utf-8")
