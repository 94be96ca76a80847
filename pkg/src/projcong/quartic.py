"""Real roots of quartics and the width/tau system ``x + y = a``, ``x^-2 + y^-2 = b``.

Eliminating ``y = a - x`` and clearing denominators gives

    b x^2 (a - x)^2 - (x - a)^2 - x^2 = 0,

i.e. ``b x^4 - 2ab x^3 + (a^2 b - 2) x^2 + 2a x - a^2 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

ROOT_RESIDUAL = 1e-9
SCAN_CELLS = 10_000


def _polyval(c, x):
    return np.polyval(c, x)


def _polish(c, x: float, steps: int = 4) -> float:
    d = np.polyder(c)
    px = abs(_polyval(c, x))
    for _ in range(steps):
        dx = _polyval(d, x)
        if dx == 0.0:
            break
        nx = x - _polyval(c, x) / dx
        npx = abs(_polyval(c, nx))
        if not npx < px:
            break
        x, px = nx, npx
    return x


def real_quartic_roots(c4: float, c3: float, c2: float, c1: float, c0: float) -> list[float]:
    """Real roots of ``c4 x^4 + ... + c0`` with multiplicity, ascending.

    Companion-matrix eigenvalues, Newton-polished; a root is accepted when
    ``|p(x)| <= 1e-9 * max|c_i| * max(1, |x|)^4``.  Nearly-real conjugate pairs
    (a numerically split double root) count twice.
    """
    if c4 == 0:
        raise ValueError("leading coefficient is zero: not a quartic")
    c = np.array([c4, c3, c2, c1, c0], dtype=float)
    cmax = float(np.max(np.abs(c)))
    roots = []
    for z in np.roots(c):
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        x = _polish(c, float(z.real))
        if abs(_polyval(c, x)) <= ROOT_RESIDUAL * cmax * max(1.0, abs(x)) ** 4:
            roots.append(float(x))
    return sorted(roots)


@dataclass(frozen=True)
class QuarticSystemSolution:
    a: float
    b: float
    pairs: tuple[tuple[float, float], ...]
    residuals: tuple[float, ...]

    @property
    def xs(self) -> list[float]:
        return [x for x, _ in self.pairs]


def width_tau_quartic(a: float, b: float) -> np.ndarray:
    return np.array([b, -2 * a * b, a * a * b - 2.0, 2 * a, -a * a])


def _scan_roots(c, a: float, cells: int = SCAN_CELLS) -> list[float]:
    """Roots bracketed by sign changes of the quartic on a uniform grid of ``(0, a)``."""
    x = np.linspace(0.0, a, cells + 1)[1:-1]
    p = _polyval(c, x)
    out = [float(xi) for xi, pi in zip(x, p) if pi == 0.0]
    for i in np.flatnonzero(p[:-1] * p[1:] < 0):
        out.append(brentq(lambda t: _polyval(c, t), x[i], x[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return out


def _cluster(xs: list[float], spacing: float) -> list[float]:
    if not xs:
        return []
    xs = sorted(xs)
    groups = [[xs[0]]]
    for x in xs[1:]:
        if x - groups[-1][-1] <= spacing:
            groups[-1].append(x)
        else:
            groups.append([x])
    return [float(np.mean(g)) for g in groups]


def solve_width_tau_system(a: float, b: float) -> QuarticSystemSolution:
    """All real ``(x, y)`` with ``x, y > 0``, ``x + y = a`` and ``x^-2 + y^-2 = b``."""
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    c = width_tau_quartic(a, b)
    spacing = 1e-7 * a
    xs = [x for x in real_quartic_roots(*c) if 0.0 < x < a]
    for x in _scan_roots(c, a):
        if all(abs(x - r) > spacing for r in xs):
            xs.append(x)
    # the solution set is symmetric under x <-> a - x
    xs = _cluster(xs + [a - x for x in xs], spacing)

    pairs, residuals = [], []
    for x in xs:
        y = a - x
        if not (0.0 < x < a):
            continue
        r = abs(x**-2 + y**-2 - b)
        if r <= 1e-8 * max(1.0, b):
            pairs.append((x, y))
            residuals.append(r)
    return QuarticSystemSolution(a, b, tuple(pairs), tuple(residuals))
