import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projcong.bodies import SupportSeries, constant_width_harmonic
from projcong.geometry import circle_angles, circle_point, frame_for
from projcong.quartic import real_quartic_roots, solve_width_tau_system, width_tau_quartic

Z = np.array([0.0, 0.0, 1.0])


def test_quartic_roots_examples():
    assert real_quartic_roots(1, 0, 0, 0, -1) == pytest.approx([-1.0, 1.0], abs=1e-14)
    assert real_quartic_roots(1, 0, 0, 0, 1) == []
    c = np.poly([1.0, 1.0, 2.0, -3.0])  # (x-1)^2 (x-2) (x+3)
    assert list(c) == [1.0, -1.0, -7.0, 13.0, -6.0]
    roots = real_quartic_roots(*c)
    assert roots == pytest.approx([-3.0, 1.0, 1.0, 2.0], abs=1e-7)
    for r in roots:
        assert abs(np.polyval(c, r)) <= 1e-9 * 13 * max(1, abs(r)) ** 4


def test_quartic_roots_reject_lower_degree():
    with pytest.raises(ValueError):
        real_quartic_roots(0, 1, 0, 0, -1)


roots_st = st.lists(st.floats(-10, 10, allow_nan=False), min_size=4, max_size=4)


@given(roots_st, st.floats(0.1, 10))
def test_quartic_roots_meet_the_residual_bound(roots, lead):
    c = lead * np.poly(roots)
    found = real_quartic_roots(*c)
    assert len(found) <= 4
    cmax = np.max(np.abs(c))
    for r in found:
        assert abs(np.polyval(c, r)) <= 1e-9 * cmax * max(1.0, abs(r)) ** 4


@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4, unique=True).filter(
    lambda r: min(abs(a - b) for i, a in enumerate(r) for b in r[i + 1:]) > 1e-2))
def test_well_separated_roots_are_all_found(roots):
    found = real_quartic_roots(*np.poly(roots))
    assert found == pytest.approx(sorted(roots), abs=1e-8)


def test_width_tau_quartic_expansion():
    a, b = 3.0, 1.25
    x = np.linspace(0.1, 2.9, 17)
    direct = b * x**2 * (a - x) ** 2 - (x - a) ** 2 - x**2
    assert np.polyval(width_tau_quartic(a, b), x) == pytest.approx(direct, abs=1e-12)


def test_system_examples():
    sol = solve_width_tau_system(2.0, 2.0)
    assert len(sol.pairs) == 1
    assert sol.pairs[0] == pytest.approx((1.0, 1.0), abs=1e-7)
    sol = solve_width_tau_system(3.0, 1.25)
    assert [p for p in sol.pairs] == [pytest.approx((1.0, 2.0), abs=1e-12), pytest.approx((2.0, 1.0), abs=1e-12)]
    assert solve_width_tau_system(2.0, 1.0).pairs == ()
    with pytest.raises(ValueError):
        solve_width_tau_system(-1.0, 1.0)


def test_no_solutions_below_the_minimum_sign_scan_oracle():
    # x^-2 + (a-x)^-2 - b never changes sign on (0, a) when b < 8/a^2
    a, b = 2.0, 1.0
    x = np.linspace(0, a, 1_000_002)[1:-1]
    g = x**-2 + (a - x) ** -2 - b
    assert np.all(g > 0)
    assert np.all(np.polyval(width_tau_quartic(a, b), x) < 0)
    assert solve_width_tau_system(a, b).pairs == ()


def test_planted_pairs_are_recovered():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        x, y = rng.uniform(0.1, 5.0, size=2)
        sol = solve_width_tau_system(x + y, x**-2 + y**-2)
        assert len(sol.pairs) <= 4
        assert any(abs(p - x) <= 1e-8 and abs(q - y) <= 1e-8 for p, q in sol.pairs)


@given(st.floats(0.2, 10), st.floats(0.05, 50))
def test_solution_set_invariants(a, b):
    sol = solve_width_tau_system(a, b)
    assert len(sol.pairs) <= 4
    xs = sol.xs
    assert xs == sorted(xs)
    for (x, y), r in zip(sol.pairs, sol.residuals):
        assert 0 < x < a and 0 < y < a
        assert x + y == pytest.approx(a, abs=1e-12)
        assert r <= 1e-8 * max(1.0, b)
        assert any(abs(p - y) <= 1e-7 * a for p in xs)


@given(st.floats(0.2, 10), st.floats(0.05, 50))
def test_solutions_agree_with_dense_scan(a, b):
    x = np.linspace(0, a, 200_001)[1:-1]
    g = x**-2 + (a - x) ** -2 - b
    crossings = x[np.flatnonzero(np.sign(g[:-1]) != np.sign(g[1:]))]
    xs = solve_width_tau_system(a, b).xs
    for c in crossings:
        assert min(abs(c - s) for s in xs) <= 2 * a / 200_000


@pytest.mark.parametrize("body", [SupportSeries.ball(1.5), constant_width_harmonic(0.05)])
def test_profile_values_solve_the_system_on_disk_circles(body):
    # the equator of the z-pole: width and tau both constant there
    pts = circle_point(frame_for(Z), circle_angles(256))
    h, hm = body.support(pts), body.support(-pts)
    a = float(np.mean(h + hm))
    b = float(np.mean(h**-2 + hm**-2))
    xs = solve_width_tau_system(a, b).xs
    assert xs
    assert all(min(abs(v - s) for s in xs) <= 1e-6 for v in h)
    assert np.ptp(h) <= 1e-12
