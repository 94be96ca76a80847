"""Rotation matching of projection support profiles on a great circle.

A profile samples ``h_K`` at ``n`` equally spaced points of the circle
orthogonal to a pole.  Two projections are congruent by a rotation of
``angle`` (counterclockwise in the frame's ``(e1, e2)`` orientation) when
``h_K(c(t)) = h_L(c(t + angle))`` for all ``t``; that angle is what
:func:`match_rotations` reports.  For ``L = rotated(K, AxisRotation(pole, r))``
the reported angle is ``r * pi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .bodies import ConvexBody
from .geometry import GreatCircleFrame, circle_angles, circle_point, folded_fraction, frame_for

TWO_PI = 2.0 * math.pi

F0, F1, FR, DISK, NO_MATCH = "F0", "F1", "Fr", "Disk", "NoMatch"


@dataclass(frozen=True)
class ClassifyParams:
    circle_samples: int = 512
    match_tol: float = 1e-8
    spread_tol: float = 1e-7
    workers: int = 1

    def __post_init__(self):
        if self.circle_samples < 16 or self.circle_samples % 2:
            raise ValueError("circle_samples must be even and >= 16")
        if self.match_tol <= 0 or self.spread_tol <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def angle_tol(self) -> float:
        return 1.5 * TWO_PI / self.circle_samples


@dataclass(frozen=True, eq=False)
class CircularProfile:
    frame: GreatCircleFrame
    values: np.ndarray
    # exact evaluator at arbitrary circle angles; None means trig interpolation
    sampler: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or len(v) < 16 or len(v) % 2:
            raise ValueError("a profile needs an even number (>= 16) of samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return len(self.values)

    def shifted(self, offset: float) -> np.ndarray:
        """Values at angles ``2 pi j / n + offset``."""
        if self.sampler is not None:
            return np.asarray(self.sampler(circle_angles(self.n) + offset), dtype=float)
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        return np.fft.ifft(np.fft.fft(self.values) * np.exp(1j * k * offset)).real


def sample_circle(fn: Callable[[np.ndarray], np.ndarray], frame: GreatCircleFrame, n: int) -> CircularProfile:
    """Profile of any direction function ``fn`` along the circle of ``frame``."""

    def sampler(t):
        return fn(circle_point(frame, t))

    return CircularProfile(frame, sampler(circle_angles(n)), sampler)


def profile(body: ConvexBody, frame: GreatCircleFrame, n: int = 512) -> CircularProfile:
    return sample_circle(body.support, frame, n)


@dataclass(frozen=True)
class RotationMatch:
    angle: float
    residual: float

    @property
    def fraction(self) -> float:
        return self.angle / math.pi

    @property
    def folded_fraction(self) -> float:
        return folded_fraction(self.fraction)


@dataclass(frozen=True)
class DirectionClass:
    tag: str
    matches: tuple[RotationMatch, ...]
    best_residual: float
    angle_tol: float

    def permits(self, angle: float) -> bool:
        """True if the projections may be related by a rotation of ``angle``."""
        return self.tag == DISK or any(_circ_dist(m.angle, angle) <= self.angle_tol for m in self.matches)

    @property
    def best_match(self) -> Optional[RotationMatch]:
        return min(self.matches, key=lambda m: m.residual, default=None)


def _canon(angle: float) -> float:
    a = math.fmod(angle, TWO_PI)
    if a < 0:
        a += TWO_PI
    return 0.0 if a >= TWO_PI else a


def _circ_dist(a: float, b: float) -> float:
    d = abs(_canon(a) - _canon(b))
    return min(d, TWO_PI - d)


def _check_aligned(a: CircularProfile, b: CircularProfile) -> None:
    if a.n != b.n:
        raise ValueError(f"profile sizes differ ({a.n} vs {b.n})")
    if not a.frame.same_as(b.frame):
        raise ValueError("profiles are sampled in different frames")


def _windows(b: CircularProfile) -> np.ndarray:
    # row s is b rolled left by s
    return sliding_window_view(np.concatenate([b.values, b.values]), b.n)[: b.n]


def shift_residuals(a: CircularProfile, b: CircularProfile) -> np.ndarray:
    """``out[s] = max_j |a[j] - b[(j + s) mod n]|`` for every shift ``s``."""
    _check_aligned(a, b)
    return np.max(np.abs(a.values[None, :] - _windows(b)), axis=1)


def _pruned_shift_residuals(a: CircularProfile, b: CircularProfile, bound: float) -> np.ndarray:
    """Like :func:`shift_residuals`, but ``inf`` where the residual provably exceeds ``bound``.

    The sup-norm residual dominates the RMS residual, and all RMS residuals
    come from one FFT correlation.  The exact minimum is always evaluated.
    """
    _check_aligned(a, b)
    av, bv, n = a.values, b.values, a.n
    corr = np.fft.irfft(np.conj(np.fft.rfft(av)) * np.fft.rfft(bv), n)
    mean_sq = (av @ av + bv @ bv - 2.0 * corr) / n
    slack = 1e-12 * max(np.max(np.abs(av)), np.max(np.abs(bv))) ** 2
    win = _windows(b)
    res = np.full(n, np.inf)
    sel = np.flatnonzero(mean_sq <= bound * bound + slack)
    if sel.size:
        res[sel] = np.max(np.abs(av[None, :] - win[sel]), axis=1)
    best = float(res.min())
    for s in np.argsort(mean_sq):
        if mean_sq[s] - slack > best * best:
            break
        if res[s] == np.inf:
            res[s] = np.max(np.abs(av - win[s]))
            best = min(best, float(res[s]))
    return res


def residual_at(a: CircularProfile, b: CircularProfile, shift: int) -> float:
    _check_aligned(a, b)
    return float(np.max(np.abs(a.values - np.roll(b.values, -shift))))


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_min(f, lo: float, hi: float, xtol: float = 1e-15, maxiter: int = 200) -> tuple[float, float]:
    """Golden-section minimum of ``f`` on ``[lo, hi]`` with an absolute bracket tolerance.

    The sup-norm residual is V-shaped at an exact match, which defeats
    parabolic steps; plain golden section converges on it reliably.
    """
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _scan(a: CircularProfile, b: CircularProfile, tol: float):
    """Return ``(accepted matches, best residual seen, per-shift residuals, threshold)``."""
    _check_aligned(a, b)
    n = a.n
    step = TWO_PI / n
    scale = max(float(np.max(a.values)), float(np.max(b.values)))
    thr = tol * scale
    # an exact match at an off-grid angle leaves at most one sample's worth of slope at the nearest shift
    coarse = thr + float(np.max(np.abs(np.diff(b.values, append=b.values[:1]))))
    res = _pruned_shift_residuals(a, b, coarse)
    if np.all(res <= thr):
        matches = [RotationMatch(s * step, float(res[s])) for s in range(n)]
        return matches, float(res.min()), res, thr

    local_min = (res <= np.roll(res, 1)) & (res <= np.roll(res, -1))
    candidates = np.flatnonzero((res <= thr) | (local_min & (res <= coarse)))

    def resid(angle):
        return float(np.max(np.abs(a.values - b.shifted(angle))))

    found = []
    best = float(res.min())
    for s in candidates:
        angle, r = s * step, float(res[s])
        if r > thr:
            x, fx = golden_min(resid, angle - step, angle + step)
            if fx < r:
                angle, r = x, fx
        best = min(best, r)
        if r <= thr:
            found.append(RotationMatch(_canon(angle), r))
    return _merge(found, step), best, res, thr


def _merge(matches: list[RotationMatch], spacing: float) -> list[RotationMatch]:
    """Collapse matches closer than ``spacing`` (circularly), keeping the lowest residual."""
    if not matches:
        return []
    matches = sorted(matches, key=lambda m: m.angle)
    clusters = [[matches[0]]]
    for m in matches[1:]:
        if m.angle - clusters[-1][-1].angle < spacing:
            clusters[-1].append(m)
        else:
            clusters.append([m])
    if len(clusters) > 1 and matches[0].angle + TWO_PI - matches[-1].angle < spacing:
        clusters[0].extend(clusters.pop())
    return sorted((min(c, key=lambda m: m.residual) for c in clusters), key=lambda m: m.angle)


def match_rotations(a: CircularProfile, b: CircularProfile, tol: float = 1e-8) -> list[RotationMatch]:
    """All rotation angles carrying profile ``a`` onto profile ``b`` within ``tol`` (relative).

    Constant equal profiles match at every shift; in that case each of the
    ``n`` discrete angles is returned and no refinement is attempted.
    """
    return _scan(a, b, tol)[0]


def classify(a: CircularProfile, b: CircularProfile, tol: float) -> DirectionClass:
    matches, best, res, thr = _scan(a, b, tol)
    angle_tol = 1.5 * TWO_PI / a.n
    if np.all(res <= thr):
        tag = DISK
    elif any(_circ_dist(m.angle, 0.0) <= angle_tol for m in matches):
        tag = F0
    elif any(_circ_dist(m.angle, math.pi) <= angle_tol for m in matches):
        tag = F1
    elif matches:
        tag = FR
    else:
        tag = NO_MATCH
    return DirectionClass(tag, tuple(matches), best, angle_tol)


def classify_direction(K: ConvexBody, L: ConvexBody, pole, params: ClassifyParams = ClassifyParams()) -> DirectionClass:
    frame = frame_for(pole)
    n = params.circle_samples
    return classify(profile(K, frame, n), profile(L, frame, n), params.match_tol)
