import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from projcong.bodies import SupportSeries, constant_width_harmonic, reflect, rotated
from projcong.congruence import DISK, F0, F1, FR, NO_MATCH, ClassifyParams, DirectionClass, RotationMatch
from projcong.geometry import AxisRotation, SphereGrid, circle_angles, circle_point, fibonacci_grid, frame_for, normalize
from projcong.sphere import (
    EQUAL,
    MIXED_EVIDENCE,
    REFLECTED_EQUAL,
    VIOLATION,
    DirectionRecord,
    HypothesisViolatedError,
    _verdict,
    analyze_direction,
    constant_tau_test,
    constant_width_test,
    decompose_sphere,
    orbit_covering_radius,
    verify_theorem,
)

from conftest import CUBE_VERTICES, seeded_polytope

Z = np.array([0.0, 0.0, 1.0])
PARAMS = ClassifyParams()


@pytest.fixture(scope="module")
def small_grid():
    return fibonacci_grid(60, antipodal=True)


def test_constant_width_examples(ball2, cw_body, cube):
    f = frame_for(normalize([0.2, 0.9, -0.4]))
    assert constant_width_test(ball2, f) == (True, 0.0)
    ok, spread = constant_width_test(cw_body, f)
    assert ok and spread < 1e-10
    # oracle: vertex-enumerated widths on the equator samples
    fz = frame_for(Z)
    pts = circle_point(fz, circle_angles(512))
    w = np.array([(max(v @ p for v in CUBE_VERTICES) + max(-v @ p for v in CUBE_VERTICES)) / 2 for p in pts])
    ok, spread = constant_width_test(cube, fz)
    assert not ok
    assert w.min() == pytest.approx(1.0) and w.max() == pytest.approx(math.sqrt(2))
    assert spread == pytest.approx((math.sqrt(2) - 1) / w.mean(), abs=1e-12)


def test_constant_tau_examples(ball2, cube, K):
    f = frame_for(normalize([1.0, 1.0, 1.0]))
    assert constant_tau_test(ball2, f) == (True, 0.0)
    fz = frame_for(Z)
    pts = circle_point(fz, circle_angles(512))
    tau = np.array([(1 / max(v @ p for v in CUBE_VERTICES) ** 2 + 1 / max(-v @ p for v in CUBE_VERTICES) ** 2) / 2 for p in pts])
    assert tau.max() == pytest.approx(1.0) and tau.min() == pytest.approx(0.5)
    ok, spread = constant_tau_test(cube, fz)
    assert not ok and spread == pytest.approx(0.5 / tau.mean(), abs=1e-12)
    pole = normalize([0.3, -0.6, 0.2])
    assert constant_tau_test(K, frame_for(pole))[1] == pytest.approx(constant_tau_test(K, frame_for(-pole))[1], abs=1e-12)


def test_circle_tests_need_enough_samples(cube):
    with pytest.raises(ValueError):
        constant_width_test(cube, frame_for(Z), 8)
    with pytest.raises(ValueError):
        constant_tau_test(cube, frame_for(Z), 8)


def test_decompose_identity(K, small_grid):
    rep = decompose_sphere(K, K, small_grid)
    assert rep.verdict.kind == EQUAL
    assert rep.coverage_gol and rep.coverage_mod_gol
    assert {r.tag for r in rep.records} == {F0}
    assert rep.common_width is None


def test_decompose_reflection(K, small_grid):
    rep = decompose_sphere(K, reflect(K), small_grid)
    assert rep.verdict.kind == REFLECTED_EQUAL
    assert {r.tag for r in rep.records} == {F1}


def test_decompose_rotated_copy_violates(K, small_grid):
    L = rotated(K, AxisRotation(Z, 0.37))
    rep = decompose_sphere(K, L, small_grid)
    assert rep.verdict.kind == VIOLATION and len(rep.verdict.poles) >= 1
    for pole in (Z, -Z):
        rec = analyze_direction(K, L, pole, PARAMS)
        assert rec.tag == FR
        assert abs(rec.cls.best_match.folded_fraction - 0.37) <= 2 / 512
    with pytest.raises(HypothesisViolatedError) as err:
        verify_theorem(K, L, small_grid)
    assert len(err.value.poles) == len(rep.verdict.poles)


def test_verify_theorem_verdicts(K, small_grid):
    assert verify_theorem(K, K, small_grid).kind == EQUAL
    assert verify_theorem(K, reflect(K), small_grid).kind == REFLECTED_EQUAL


def test_centrally_symmetric_bodies_prefer_equal(cube, small_grid):
    rep = decompose_sphere(cube, reflect(cube), small_grid)
    assert rep.verdict.kind == EQUAL


def test_decompose_requires_antipodal_grid(K):
    with pytest.raises(ValueError):
        decompose_sphere(K, K, fibonacci_grid(20, antipodal=False))


def _record(tag, angles):
    matches = tuple(RotationMatch(a, 0.0) for a in angles)
    cls = DirectionClass(tag, matches, 0.0, 1.5 * 2 * math.pi / 512)
    return DirectionRecord(np.array([0.0, 0.0, 1.0]), cls, 1.0, 1.0, False, False, 1.0)


def test_verdict_rules():
    assert _verdict([_record(F0, [0.0]), _record(DISK, [])]).kind == EQUAL
    assert _verdict([_record(F1, [math.pi]), _record(F0, [0.0, math.pi])]).kind == REFLECTED_EQUAL
    v = _verdict([_record(F0, [0.0]), _record(F0, [0.0]), _record(FR, [1.0])])
    assert v.kind == MIXED_EVIDENCE and len(v.poles) == 1
    v = _verdict([_record(F0, [0.0]), _record(NO_MATCH, [])])
    assert v.kind == VIOLATION and len(v.poles) == 1


def test_mixed_evidence_is_returned_not_raised(K, small_grid, monkeypatch):
    import projcong.sphere as sphere

    real = sphere.analyze_direction

    def fake(K_, L_, pole, params):
        rec = real(K_, L_, pole, params)
        if pole[2] > 0.9:
            cls = DirectionClass(FR, (RotationMatch(1.0, 0.0),), 0.0, rec.cls.angle_tol)
            return DirectionRecord(rec.pole, cls, 1.0, 1.0, False, False, 1.0)
        return rec

    monkeypatch.setattr(sphere, "analyze_direction", fake)
    assert verify_theorem(K, K, small_grid).kind == MIXED_EVIDENCE


def test_antipodal_consistency(K, small_grid):
    L = rotated(K, AxisRotation(normalize([1, 1, 0]), 0.2))
    rep = decompose_sphere(K, L, small_grid)
    anti = small_grid.antipode_index
    for i, rec in enumerate(rep.records):
        other = rep.records[anti[i]]
        assert rec.tag == other.tag
        assert abs(rec.width_spread - other.width_spread) <= 1e-12
        assert abs(rec.tau_spread - other.tau_spread) <= 1e-12
        assert rec.in_sigma == other.in_sigma and rec.in_lambda == other.in_lambda


def test_constant_width_body_shares_one_width(cw_body, small_grid):
    rep = decompose_sphere(cw_body, cw_body, small_grid)
    widths = [r.mean_width for r in rep.records if r.in_sigma]
    assert len(widths) == len(rep.records)
    tol = PARAMS.spread_tol
    for w in widths:
        assert abs(w - widths[0]) <= 2 * tol * widths[0]
    assert rep.common_width == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("body_name", ["ball2", "cw_body"])
def test_sigma_and_lambda_force_disks(body_name, request):
    body = request.getfixturevalue(body_name)
    poles = np.vstack([fibonacci_grid(30).directions, Z, -Z])
    loose = ClassifyParams(match_tol=10 * PARAMS.match_tol)
    hits = 0
    for pole in poles:
        rec = analyze_direction(body, body, pole, PARAMS)
        if rec.in_sigma and rec.in_lambda:
            hits += 1
            assert analyze_direction(body, body, pole, loose).tag in (DISK, F0)
    assert hits >= 2  # at least the poles +-z


def test_workers_do_not_change_the_report(K, small_grid):
    L = rotated(K, AxisRotation(Z, 0.37))
    a = decompose_sphere(K, L, small_grid, ClassifyParams(workers=1))
    b = decompose_sphere(K, L, small_grid, ClassifyParams(workers=4))
    for x, y in zip(a.records, b.records):
        assert x.tag == y.tag and x.cls.best_residual == y.cls.best_residual


@pytest.mark.parametrize("kind", ["reflect", "cw", "ball"])
def test_classification_is_stable_under_tiny_pole_perturbations(kind, K, cw_body, ball2):
    K_, L_ = {"reflect": (K, reflect(K)), "cw": (cw_body, cw_body), "ball": (ball2, ball2)}[kind]
    rng = np.random.default_rng(0)
    for pole in fibonacci_grid(10).directions:
        base = analyze_direction(K_, L_, pole, PARAMS)
        moved = analyze_direction(K_, L_, normalize(pole + 1e-6 * rng.normal(size=3)), PARAMS)
        assert base.tag == moved.tag
        assert base.in_sigma == moved.in_sigma


# -- orbit density -----------------------------------------------------------------


def test_orbit_examples():
    assert orbit_covering_radius(0.5, 4).covering_radius == math.pi / 2
    assert orbit_covering_radius(0.5, 100).covering_radius == math.pi / 2
    assert orbit_covering_radius(2 / 3, 3).covering_radius == pytest.approx(2 * math.pi / 3, abs=1e-12)
    assert orbit_covering_radius(math.sqrt(2) - 1, 10_000).covering_radius < 0.005
    assert orbit_covering_radius(0.3, 1).covering_radius == 2 * math.pi
    with pytest.raises(ValueError):
        orbit_covering_radius(0.3, 0)


def _sorted_orbit_gap_oracle(r: Fraction, n: int) -> float:
    pts = sorted({(k * r) % 2 for k in range(n)})
    gaps = [b - a for a, b in zip(pts, pts[1:])] + [pts[0] + 2 - pts[-1]]
    return float(max(gaps)) * math.pi


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Fraction(1, 40), max_value=Fraction(79, 40), max_denominator=40))
def test_rational_orbits_stabilize(r):
    period = (r / 2).denominator
    values = {round(orbit_covering_radius(float(r), n).covering_radius, 9) for n in (period, period + 1, 3 * period + 7)}
    assert len(values) == 1
    assert values.pop() == pytest.approx(_sorted_orbit_gap_oracle(r, period), abs=1e-9)


@pytest.mark.parametrize("r", [math.sqrt(2) - 1, (math.sqrt(5) - 1) / 2, math.sqrt(3) - 1])
@pytest.mark.parametrize("n", [100, 1000, 10_000, 100_000])
def test_irrational_orbits_become_dense(r, n):
    # quadratic irrationals: the largest gap stays within 10/n of a full turn
    assert orbit_covering_radius(r, n).covering_radius <= 2 * math.pi * 10 / n


def test_covering_radius_shrinks_for_irrational_rotation():
    radii = [orbit_covering_radius(1 / math.pi, n).covering_radius for n in (10, 100, 1000, 10_000, 100_000)]
    assert radii == sorted(radii, reverse=True)
    assert radii[-1] < 1e-3
