"""Whole-sphere decomposition of rotation matches, coverage checks and verdicts."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bodies import ConvexBody
from .congruence import DISK, F0, F1, NO_MATCH, ClassifyParams, DirectionClass, classify, profile
from .geometry import GreatCircleFrame, SphereGrid, circle_angles, circle_point, frame_for

EQUAL = "Equal"
REFLECTED_EQUAL = "ReflectedEqual"
VIOLATION = "Violation"
MIXED_EVIDENCE = "MixedEvidence"


class HypothesisViolatedError(Exception):
    """Some direction has projections that no rotation about the origin can match."""

    def __init__(self, poles):
        self.poles = [np.asarray(p) for p in poles]
        super().__init__(f"{len(self.poles)} direction(s) admit no rotation match")


def _spread(values: np.ndarray) -> float:
    return float((np.max(values) - np.min(values)) / np.mean(values))


def constant_width_test(K: ConvexBody, frame: GreatCircleFrame, n: int = 512, tol: float = 1e-7):
    """Is the width of ``K`` constant along the circle of ``frame``?  Returns ``(flag, spread)``."""
    if n < 16:
        raise ValueError("need at least 16 circle samples")
    spread = _spread(K.width(circle_point(frame, circle_angles(n))))
    return spread <= tol, spread


def constant_tau_test(K: ConvexBody, frame: GreatCircleFrame, n: int = 512, tol: float = 1e-7):
    if n < 16:
        raise ValueError("need at least 16 circle samples")
    spread = _spread(K.tau_dual(circle_point(frame, circle_angles(n))))
    return spread <= tol, spread


@dataclass(frozen=True, eq=False)
class DirectionRecord:
    pole: np.ndarray
    cls: DirectionClass
    width_spread: float
    tau_spread: float
    in_sigma: bool
    in_lambda: bool
    mean_width: float

    @property
    def tag(self) -> str:
        return self.cls.tag


@dataclass(frozen=True)
class Verdict:
    kind: str
    poles: tuple = ()

    def __str__(self):
        return self.kind


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    grid: SphereGrid
    records: list[DirectionRecord]
    coverage_gol: bool
    coverage_mod_gol: bool
    common_width: Optional[float]
    verdict: Verdict


def analyze_direction(K: ConvexBody, L: ConvexBody, pole, params: ClassifyParams) -> DirectionRecord:
    frame = frame_for(pole)
    n = params.circle_samples
    cls = classify(profile(K, frame, n), profile(L, frame, n), params.match_tol)
    pts = circle_point(frame, circle_angles(n))
    widths = K.width(pts)
    w_spread = _spread(widths)
    t_spread = _spread(K.tau_dual(pts))
    return DirectionRecord(
        pole=np.asarray(pole, dtype=float),
        cls=cls,
        width_spread=w_spread,
        tau_spread=t_spread,
        in_sigma=w_spread <= params.spread_tol,
        in_lambda=t_spread <= params.spread_tol,
        mean_width=float(np.mean(widths)),
    )


def _verdict(records: list[DirectionRecord]) -> Verdict:
    missing = tuple(r.pole for r in records if r.tag == NO_MATCH)
    if missing:
        return Verdict(VIOLATION, missing)
    no_zero = [r for r in records if not r.cls.permits(0.0)]
    no_pi = [r for r in records if not r.cls.permits(math.pi)]
    if not no_zero:
        return Verdict(EQUAL)
    if not no_pi:
        return Verdict(REFLECTED_EQUAL)
    # blame the directions that contradict the better-supported conclusion
    blamed = no_zero if len(no_zero) <= len(no_pi) else no_pi
    return Verdict(MIXED_EVIDENCE, tuple(r.pole for r in blamed))


def decompose_sphere(
    K: ConvexBody, L: ConvexBody, grid: SphereGrid, params: ClassifyParams = ClassifyParams()
) -> DecompositionReport:
    if not grid.antipodal:
        raise ValueError("decompose_sphere needs an antipodally symmetric grid")
    poles = list(grid.directions)
    if params.workers > 1:
        with ThreadPoolExecutor(params.workers) as ex:
            records = list(ex.map(lambda p: analyze_direction(K, L, p, params), poles))
    else:
        records = [analyze_direction(K, L, p, params) for p in poles]

    matched = {F0, F1, DISK}
    coverage_gol = all(r.tag in matched or r.in_sigma for r in records)
    coverage_mod_gol = all(r.tag in matched or r.in_lambda for r in records)
    sigma = [r.mean_width for r in records if r.in_sigma]
    common_width = float(np.mean(sigma)) if len(sigma) >= 2 else None
    return DecompositionReport(grid, records, coverage_gol, coverage_mod_gol, common_width, _verdict(records))


def verify_theorem(
    K: ConvexBody, L: ConvexBody, grid: SphereGrid, params: ClassifyParams = ClassifyParams()
) -> Verdict:
    """Equal / ReflectedEqual (or MixedEvidence); raises ``HypothesisViolatedError`` on unmatched directions."""
    verdict = decompose_sphere(K, L, grid, params).verdict
    if verdict.kind == VIOLATION:
        raise HypothesisViolatedError(verdict.poles)
    return verdict


@dataclass(frozen=True)
class OrbitReport:
    fraction: float
    steps: int
    covering_radius: float


def orbit_covering_radius(r: float, n: int) -> OrbitReport:
    """Largest gap of the orbit ``{k r pi mod 2 pi : 0 <= k < n}`` on the circle."""
    if n < 1:
        raise ValueError("need at least one orbit point")
    # work in units of pi so dyadic fractions stay exact
    pts = np.sort(np.fmod(np.arange(n) * float(r), 2.0) % 2.0)
    gaps = np.diff(pts, append=pts[0] + 2.0)
    return OrbitReport(float(r), n, float(np.max(gaps)) * math.pi)
