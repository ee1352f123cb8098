import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wanderlab import hypgeo as hg
from wanderlab import tower as tw
from wanderlab.errors import (
    AmbiguousClassification,
    DegenerateBasePoint,
    PointOutsideDomain,
    StageOutOfRange,
)
from wanderlab.hypgeo import LogPolarPoint, annulus
from wanderlab.sampling import sample_circle_pairs, sample_generic_pairs, sample_ray_pairs

TWO_PI = 2.0 * math.pi


def doubling_tower(depth=45, R=2.0):
    return tw.PowerTower(R, (2,) * depth)


# ---------------------------------------------------------------------------
# construction and iteration
# ---------------------------------------------------------------------------

def test_tower_requires_nontrivial_degrees():
    with pytest.raises(ValueError):
        tw.PowerTower(2.0, (1, 1, 1))
    with pytest.raises(ValueError):
        tw.PowerTower(2.0, (2, 0))
    with pytest.raises(ValueError):
        tw.PowerTower(1.0, (2,))


def test_cumulative_degrees_are_exact():
    t = tw.PowerTower(2.0, (3, 2, 5))
    assert t.cumulative == (1, 3, 6, 30)


def test_iterate_examples():
    t = doubling_tower(10)
    got = tw.iterate(t, LogPolarPoint(0.0, math.pi / 4.0), 3)
    assert (got.nu, got.theta, got.stage) == (0.0, 0.0, 3)

    anyt = tw.PowerTower(2.0, (7, 2))
    p = LogPolarPoint(0.31, 2.1)
    start = tw.iterate(anyt, p, 0)
    assert start.stage == 0
    assert start.theta == pytest.approx(2.1, abs=1e-15)
    assert start.nu == pytest.approx(0.31 / math.log(2.0), abs=1e-15)

    mixed = tw.PowerTower(math.e, (3, 2))
    got = tw.iterate(mixed, LogPolarPoint(0.5, 0.1), 2)
    assert got.nu == pytest.approx(0.5, abs=1e-15)
    assert got.theta == pytest.approx(0.6, abs=1e-14)


def test_iterate_errors():
    t = doubling_tower(5)
    with pytest.raises(PointOutsideDomain):
        tw.iterate(t, LogPolarPoint(1.0, 0.0), 1)
    with pytest.raises(StageOutOfRange):
        tw.iterate(t, LogPolarPoint(0.1, 0.0), 6)


def test_collision_pairs_land_on_identical_points():
    # arguments differing by (2 pi) / D_k reduce to bit-identical angles at
    # stage k; the exact rational staging is what makes this hold
    t = doubling_tower(12)
    for k in (2, 5, 9, 12):
        z = LogPolarPoint(0.3, 0.0)
        w = LogPolarPoint(0.3, TWO_PI / 2 ** k)
        assert tw.iterate(t, z, k) == tw.iterate(t, w, k)
        if k < 12:
            assert tw.iterate(t, z, k + 1) == tw.iterate(t, w, k + 1)


def test_collision_with_mixed_degrees():
    t = tw.PowerTower(2.0, (3, 2, 3, 2))
    z = LogPolarPoint(0.1, 0.0)
    w = LogPolarPoint(0.1, TWO_PI / 2.0)
    assert tw.iterate(t, z, 2) == tw.iterate(t, w, 2)  # D_2 = 6 kills the offset
    assert tw.iterate(t, z, 1) != tw.iterate(t, w, 1)


def test_near_collision_general_base_angle():
    t = doubling_tower(12)
    z = LogPolarPoint(0.2, 1.2345)
    w = LogPolarPoint(0.2, 1.2345 + TWO_PI / 2 ** 8)
    a, b = tw.iterate(t, z, 8), tw.iterate(t, w, 8)
    # construction rounding of theta_w keeps this from being exact, but the
    # staged reduction must not amplify it
    assert abs(a.theta - b.theta) < 1e-9


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def test_classify_examples():
    u = math.log(1.5)
    assert tw.classify_pair(LogPolarPoint(u, 0.0), LogPolarPoint(u, math.pi / 3)).tag is tw.PairTag.SAME_CIRCLE
    assert tw.classify_pair(
        LogPolarPoint(math.log(1.2), 1.0), LogPolarPoint(math.log(1.7), 1.0)
    ).tag is tw.PairTag.SAME_RAY
    assert tw.classify_pair(
        LogPolarPoint(math.log(1.2), 0.0), LogPolarPoint(math.log(1.7), 1.0)
    ).tag is tw.PairTag.GENERIC


def test_classify_branch_is_not_normalized_away():
    # a full-turn argument difference is a circle-mate, not a ray-mate
    p = LogPolarPoint(0.1, 0.0)
    q = LogPolarPoint(0.1, TWO_PI)
    assert tw.classify_pair(p, q).tag is tw.PairTag.SAME_CIRCLE


def test_classify_ambiguous_with_positive_tolerance():
    p = LogPolarPoint(0.0, 0.0)
    q = LogPolarPoint(1e-15, 1e-15)
    with pytest.raises(AmbiguousClassification):
        tw.classify_pair(p, q, tol=1e-12)


@given(
    u1=st.floats(-0.6, 0.6),
    u2=st.floats(-0.6, 0.6),
    t1=st.floats(0.0, TWO_PI),
    t2=st.floats(0.0, TWO_PI),
)
@settings(max_examples=200, deadline=None)
def test_classification_exclusive_and_exhaustive_at_zero_tolerance(u1, u2, t1, t2):
    p, q = LogPolarPoint(u1, t1), LogPolarPoint(u2, t2)
    tag = tw.classify_pair(p, q).tag
    same_u = u1 == u2
    same_ray = tw._angular_gap(p, q) == 0.0
    if same_u:
        assert tag is tw.PairTag.SAME_CIRCLE
    elif same_ray:
        assert tag is tw.PairTag.SAME_RAY
    else:
        assert tag is tw.PairTag.GENERIC


def test_foliation_transversality_through_every_point(rng):
    # each point meets exactly one circle leaf and one ray leaf at tol = 0
    t = doubling_tower(5)
    for _ in range(25):
        u = rng.uniform(-0.6, 0.6)
        th = rng.uniform(0.0, TWO_PI)
        p = LogPolarPoint(u, th)
        circle_mate = LogPolarPoint(u, th + 1.0)
        ray_mate = LogPolarPoint(u + 0.05, th)
        assert tw.classify_pair(p, circle_mate).tag is tw.PairTag.SAME_CIRCLE
        assert tw.classify_pair(p, ray_mate).tag is tw.PairTag.SAME_RAY


# ---------------------------------------------------------------------------
# distances along the tower
# ---------------------------------------------------------------------------

def test_stage_zero_matches_the_annulus_metric(rng):
    t = doubling_tower()
    dom = annulus(t.R)
    for _ in range(30):
        z = LogPolarPoint(rng.uniform(-0.6, 0.6), rng.uniform(0.0, TWO_PI))
        w = LogPolarPoint(rng.uniform(-0.6, 0.6), rng.uniform(0.0, TWO_PI))
        expect = hg.distance(dom, z.to_complex(), w.to_complex())
        assert tw.pair_distance(t, z, w, 0) == pytest.approx(expect, abs=1e-12)


def test_same_ray_pairs_are_isometric_forever(rng):
    t = doubling_tower()
    for z, w in sample_ray_pairs(t.R, 10, rng):
        d0 = tw.pair_distance(t, z, w, 0)
        for n in range(1, 21):
            assert tw.pair_distance(t, z, w, n) == pytest.approx(d0, abs=1e-10)


def test_same_circle_pairs_obey_the_collapse_bound(rng):
    t = doubling_tower()
    for z, w in sample_circle_pairs(t.R, 10, rng):
        r = math.exp(z.u)
        for n in range(0, 21):
            d = tw.pair_distance(t, z, w, n, mode="exact")
            assert d <= tw.circle_collapse_bound(t, r, n) + 1e-9


def test_schwarz_pick_monotonicity(rng):
    t = doubling_tower()
    pairs = (
        sample_circle_pairs(t.R, 5, rng)
        + sample_ray_pairs(t.R, 5, rng)
        + sample_generic_pairs(t.R, 5, rng)
    )
    for z, w in pairs:
        prev = tw.pair_distance(t, z, w, 0, mode="exact")
        for n in range(1, 25):
            cur = tw.pair_distance(t, z, w, n, mode="exact")
            assert cur <= prev + 1e-12
            prev = cur


def test_limit_distance_same_modulus_is_zero():
    t = doubling_tower()
    assert tw.limit_distance(t, LogPolarPoint(0.2, 0.0), LogPolarPoint(0.2, 2.0)) == 0.0


def test_limit_distance_same_ray_equals_annulus_distance():
    t = doubling_tower()
    z, w = LogPolarPoint(0.4, 1.3), LogPolarPoint(-0.2, 1.3)
    assert tw.limit_distance(t, z, w) == pytest.approx(
        tw.pair_distance(t, z, w, 0), abs=1e-12
    )


def test_limit_distance_generic_example():
    # R = 2, z = 1.5, w = 1.2 i; oracle = deep-stage distance in asymptotic
    # mode (deck spacing below 1e-5 at D_n = 2^40)
    t = doubling_tower()
    z = LogPolarPoint(math.log(1.5), 0.0)
    w = LogPolarPoint(math.log(1.2), math.pi / 2.0)
    v = tw.limit_distance(t, z, w)
    d0 = tw.pair_distance(t, z, w, 0)
    assert 0.0 < v < d0
    deep = tw.pair_distance(t, z, w, 40)
    assert tw.is_asymptotic_stage(t, 40)
    assert v == pytest.approx(deep, abs=1e-6)
    assert v == pytest.approx(tw.pair_distance(t, z, w, 40, mode="exact"), abs=1e-6)


def test_limit_matches_continuum_infimum_formula(rng):
    # the inverse-Gudermannian closed form is a derived result; cross-check it
    # against the continuum infimum evaluated through the other code path
    t = doubling_tower()
    for z, w in sample_generic_pairs(t.R, 20, rng):
        lim = tw.limit_distance(t, z, w)
        inf_form = tw.pair_distance(t, z, w, 41, mode="asymptotic")
        assert lim == pytest.approx(inf_form, abs=1e-12)


def test_reverse_triangle_lower_bound(rng):
    # mediator z* shares the circle of z and the ray of w
    t = doubling_tower()
    for z, w in sample_generic_pairs(t.R, 8, rng):
        zs = LogPolarPoint(z.u, w.theta)
        for n in range(0, 15):
            d_zw = tw.pair_distance(t, z, w, n)
            d_zzs = tw.pair_distance(t, z, zs, n)
            d_zsw = tw.pair_distance(t, zs, w, n)
            assert d_zw >= abs(d_zzs - d_zsw) - 1e-12


def test_pair_distance_errors():
    t = doubling_tower(5)
    with pytest.raises(StageOutOfRange):
        tw.pair_distance(t, LogPolarPoint(0.1, 0.0), LogPolarPoint(0.2, 0.0), 6)
    with pytest.raises(PointOutsideDomain):
        tw.pair_distance(t, LogPolarPoint(0.8, 0.0), LogPolarPoint(0.2, 0.0), 1)
    with pytest.raises(ValueError):
        tw.pair_distance(t, LogPolarPoint(0.1, 0.0), LogPolarPoint(0.2, 0.0), 1, mode="bogus")


# ---------------------------------------------------------------------------
# trichotomy reports
# ---------------------------------------------------------------------------

def test_trichotomy_circle(rng):
    t = doubling_tower()
    for z, w in sample_circle_pairs(t.R, 5, rng):
        rep = tw.trichotomy_report(t, z, w, 20)
        assert rep.verdict is tw.TrichotomyVerdict.CONTRACTING
        values = [e.value for e in rep.trace.entries]
        assert values[-1] < 1e-4 * values[0]
        assert rep.trace.monotone


def test_trichotomy_ray(rng):
    t = doubling_tower()
    for z, w in sample_ray_pairs(t.R, 5, rng):
        rep = tw.trichotomy_report(t, z, w, 20)
        assert rep.verdict is tw.TrichotomyVerdict.ISOMETRIC
        values = [e.value for e in rep.trace.entries]
        assert max(abs(v - values[0]) for v in values) < 1e-10
        assert rep.trace.eventually_constant


def test_trichotomy_generic(rng):
    t = doubling_tower()
    for z, w in sample_generic_pairs(t.R, 5, rng):
        rep = tw.trichotomy_report(t, z, w, 20)
        assert rep.verdict is tw.TrichotomyVerdict.SEMI_CONTRACTING
        values = [e.value for e in rep.trace.entries]
        assert values[-1] < values[0]
        assert min(values) >= rep.trace.limit_estimate - 1e-9
        assert values[-1] == pytest.approx(rep.trace.limit_estimate, abs=1e-5)


def test_trichotomy_rejects_bad_depth():
    t = doubling_tower(5)
    with pytest.raises(ValueError):
        tw.trichotomy_report(t, LogPolarPoint(0.1, 0.0), LogPolarPoint(0.2, 1.0), 0)
    with pytest.raises(StageOutOfRange):
        tw.trichotomy_report(t, LogPolarPoint(0.1, 0.0), LogPolarPoint(0.2, 1.0), 9)


def test_trace_rows_shape():
    t = doubling_tower()
    rep = tw.trichotomy_report(t, LogPolarPoint(0.3, 0.2), LogPolarPoint(-0.1, 2.0), 6)
    rows = rep.trace.rows()
    assert len(rows) == 7
    assert rows[3][0] == 3 and rows[3][1] == 8
    assert all(len(row) == 4 for row in rows)


# ---------------------------------------------------------------------------
# the invariant log-modulus ratio
# ---------------------------------------------------------------------------

def test_h_value_examples():
    t = doubling_tower(5)
    p = LogPolarPoint(0.25, 1.0)
    assert tw.h_value(t, p, p) == 1.0
    assert tw.h_value(t, LogPolarPoint(0.25, 1.0), LogPolarPoint(0.5, 2.0)) == 0.5
    with pytest.raises(DegenerateBasePoint):
        tw.h_value(t, p, LogPolarPoint(0.0, 0.3))


def test_h_value_stage_invariance_is_exact():
    # advancing both points a stage scales log-moduli by the same power of
    # two, which cancels exactly in floating point
    t = doubling_tower(10)
    z, z0 = LogPolarPoint(0.21, 0.4), LogPolarPoint(0.33, 2.2)
    base = tw.h_value(t, z, z0)
    for n in (1, 4, 9):
        scale = float(t.cumulative[n])
        assert (z.u * scale) / (z0.u * scale) == base


def test_h_level_sets_are_circle_leaves(rng):
    t = doubling_tower(5)
    z0 = LogPolarPoint(0.5, 0.0)
    for _ in range(25):
        u = rng.uniform(-0.6, 0.6)
        a = LogPolarPoint(u, rng.uniform(0.0, TWO_PI))
        b = LogPolarPoint(u, rng.uniform(0.0, TWO_PI))
        assert tw.h_value(t, a, z0) == tw.h_value(t, b, z0)
        assert tw.classify_pair(a, b).tag is tw.PairTag.SAME_CIRCLE
        c = LogPolarPoint(u + 0.01, a.theta)
        assert tw.h_value(t, c, z0) != tw.h_value(t, a, z0)


# ---------------------------------------------------------------------------
# collapse bound
# ---------------------------------------------------------------------------

def test_circle_collapse_bound_example():
    t = tw.PowerTower(math.e, (2,) * 5)
    assert tw.circle_collapse_bound(t, 1.0, 3) == pytest.approx(math.pi ** 2 / 8, abs=1e-12)


def test_circle_collapse_bound_blows_up_at_the_edge():
    t = tw.PowerTower(math.e, (2,) * 3)
    values = [tw.circle_collapse_bound(t, r, 1) for r in (1.0, 2.0, 2.6, 2.71)]
    assert values == sorted(values)
    assert values[-1] > 50.0
    with pytest.raises(PointOutsideDomain):
        tw.circle_collapse_bound(t, 3.0, 1)


def test_upper_subannulus_distance_requires_positive_modulus():
    t = doubling_tower(5)
    with pytest.raises(PointOutsideDomain):
        tw.upper_subannulus_distance(t, LogPolarPoint(-0.1, 0.0), LogPolarPoint(0.2, 1.0), 1)
