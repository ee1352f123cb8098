"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Tolerances are pinned here exactly as stated; nothing is deferred
to later calibration.
"""

import json
import math

import numpy as np
import pytest

from wanderlab import boundary as bd
from wanderlab import cli
from wanderlab import hypgeo as hg
from wanderlab import modelmap as mm
from wanderlab import sampling
from wanderlab import silhouette as sil
from wanderlab import tower as tw
from wanderlab.hypgeo import (
    HorizontalStrip,
    LogPolarPoint,
    PolylinePath,
    RightHalfPlane,
    SymmetricAnnulus,
    UnitDisk,
    annulus,
)

SEED = 1702


def _report(cid, text):
    print(f"\nACCEPTANCE {cid}: PASS ({text})")


def test_c01_metric_oracle_equivalence():
    # closed-form / deck-minimized distances vs quadrature path length, 1e-7
    rng = np.random.default_rng(SEED)
    domains = [UnitDisk(), RightHalfPlane(), HorizontalStrip()] + [
        annulus(R) for R in (1.5, math.e, 5.0)
    ]
    worst = 0.0
    for domain in domains:
        for _ in range(100):
            z, w = sampling.sample_oracle_pair(domain, rng)
            pts = hg.geodesic_points(domain, z, w, 4096)
            oracle = hg.path_length(PolylinePath(tuple(pts), domain))
            worst = max(worst, abs(hg.distance(domain, z, w) - oracle))
    assert worst < 1e-7
    _report("C1", f"600 pairs, worst closed-form vs quadrature gap {worst:.2e}")


def test_c02_core_circle_length():
    worst = 0.0
    for R in (1.5, math.e, 5.0):
        ts = np.linspace(0.0, 2.0 * math.pi, 4097)
        circle = tuple(np.exp(1j * ts))
        got = hg.path_length(PolylinePath(circle, annulus(R)))
        expect = 2.0 * math.pi ** 2 / SymmetricAnnulus(R).modulus()
        worst = max(worst, abs(got - expect))
    assert worst < 1e-4
    _report("C2", f"unit-circle length at 4096 segments, worst gap {worst:.2e}")


def test_c03_trichotomy():
    rng = np.random.default_rng(SEED)
    twr = tw.PowerTower(2.0, (2,) * 41)
    N = 20

    # (i) same-circle pairs: collapse-bound domination and 1e-4 contraction
    worst_ratio = 0.0
    for z, w in sampling.sample_circle_pairs(2.0, 50, rng):
        rep = tw.trichotomy_report(twr, z, w, N)
        assert rep.verdict is tw.TrichotomyVerdict.CONTRACTING
        for entry in rep.trace.entries:
            assert entry.value <= entry.bound + 1e-9
        d0 = rep.trace.entries[0].value
        d20 = tw.pair_distance(twr, z, w, N, mode="exact")
        worst_ratio = max(worst_ratio, d20 / d0)
    assert worst_ratio < 1e-4

    # (ii) same-ray pairs: isometric to 1e-10
    worst_dev = 0.0
    for z, w in sampling.sample_ray_pairs(2.0, 50, rng):
        rep = tw.trichotomy_report(twr, z, w, N)
        assert rep.verdict is tw.TrichotomyVerdict.ISOMETRIC
        values = [e.value for e in rep.trace.entries]
        worst_dev = max(worst_dev, max(abs(v - values[0]) for v in values))
    assert worst_dev < 1e-10

    # (iii) generic pairs: decreasing traces above the limit, deep-stage
    # agreement with the derived closed form, reverse-triangle floor
    worst_limit_gap = 0.0
    for z, w in sampling.sample_generic_pairs(2.0, 50, rng):
        rep = tw.trichotomy_report(twr, z, w, N)
        assert rep.verdict is tw.TrichotomyVerdict.SEMI_CONTRACTING
        values = [e.value for e in rep.trace.entries]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
        assert values[-1] < values[0]
        limit = rep.trace.limit_estimate
        assert min(values) >= limit - 1e-9
        deep = tw.pair_distance(twr, z, w, 40)  # D_40 = 2^40
        worst_limit_gap = max(worst_limit_gap, abs(deep - limit))
        mediator = LogPolarPoint(z.u, w.theta)
        floor = abs(
            tw.pair_distance(twr, z, mediator, N) - tw.pair_distance(twr, mediator, w, N)
        )
        assert floor - 1e-9 <= limit <= values[0] + 1e-12
    assert worst_limit_gap < 1e-6
    _report(
        "C3",
        f"150 pairs: contraction {worst_ratio:.2e}, ray drift {worst_dev:.2e}, "
        f"limit gap {worst_limit_gap:.2e}",
    )


def test_c04_covering_degree_equality_case():
    assert hg.degree_bound(2.0, 8.0) == pytest.approx(3.0, abs=1e-15)
    rng = np.random.default_rng(SEED)
    cube = tw.PowerTower(2.0, (3,))
    worst = 0.0
    for z, w in sampling.sample_ray_pairs(2.0, 25, rng):
        before = tw.pair_distance(cube, z, w, 0)
        after = tw.pair_distance(cube, z, w, 1)
        zc, wc = z.to_complex(), w.to_complex()
        direct = hg.distance(annulus(8.0), zc ** 3, wc ** 3)
        worst = max(worst, abs(after - before), abs(direct - before))
    assert worst < 1e-10
    _report("C4", f"cube map acts isometrically on ray pairs, worst drift {worst:.2e}")


def test_c05_silhouette_decision_table():
    for k in range(3, 51):
        brute = {
            (m, d)
            for m in range(1, 101)
            for d in range(0, 101)
            if k - 2 == m * (k - 2) + d
        }
        assert sil.feasible_degrees(k) == brute == {(1, 0)}

    def sig(conns, bounded=None):
        flags = bounded or [True] * len(conns)
        return sil.ConnectivitySignature(tuple(zip(conns, flags)))

    doubling = sil.modulus_growth(2.0 * math.log(2.0), (2,) * 8)
    rows = [
        (sil.classify_silhouette(sig((4,) * 8)), sil.DynamicsClass.EVENTUALLY_ISOMETRIC),
        (
            sil.classify_silhouette(sig((2,) * 8), moduli=(1.0,) * 8),
            sil.DynamicsClass.EVENTUALLY_ISOMETRIC,
        ),
        (
            sil.classify_silhouette(sig((2,) * 9), moduli=doubling),
            sil.DynamicsClass.TRIMODAL,
        ),
        (sil.classify_silhouette(sig((2,) * 8), baker=True), sil.DynamicsClass.TRIMODAL),
        (
            sil.classify_silhouette(sig((sil.INFINITE,) * 8), baker=True),
            sil.DynamicsClass.BIMODAL,
        ),
    ]
    for verdict, expected in rows:
        assert verdict.kind is expected
    _report("C5", "feasible degrees match brute force on [3, 50]; all 5 verdict rows")


def test_c06_model_map_certification(model_params):
    p = model_params
    assert (p.r, p.eps) == (2.5, 1e-3)
    report = mm.params_report(p)
    assert all(ok for _, ok in report)

    min_clear = math.inf
    for n in range(8):
        rep = mm.verify_containment(p, n, samples=10_000)
        assert rep.passed
        min_clear = min(min_clear, rep.min_clearance)
    assert min_clear > p.eps - mm.CLEARANCE_GUARD

    assert mm.winding_number(lambda z: z ** 3, mm.circle_curve(0, 1.0, 512), 0) == 3
    assert mm.winding_number(mm.phi, mm.circle_curve(0, 3.0, 512), 0) == -1
    assert mm.winding_number(mm.phi, mm.circle_curve(0, 0.5, 512), 0) == 1

    pattern = []
    for k in range(p.stages):
        audits = mm.connectivity_audit(p, k)
        assert all(a.passed for a in audits)
        pattern.extend((a.expected_connectivity, a.expected_bounded) for a in audits)
    assert pattern == [(1, False), (2, True), (1, True), (1, False)] * p.stages
    _report(
        "C6",
        f"{len(report)} inequalities, 8 containment stages at 1e4 samples "
        f"(min clearance {min_clear:.6f} vs eps {p.eps}), windings 3/-1/+1, "
        "period-four pattern",
    )


def test_c07_eventual_connectivity():
    def sig(conns, bounded=None):
        flags = bounded or [True] * len(conns)
        return sil.ConnectivitySignature(tuple(zip(conns, flags)))

    wild = sig((1, 2, 1, 1) * 2, [False, True, True, False] * 2)
    out = sil.eventual_connectivity(wild)
    assert not out.settled and out.period == 4
    assert out.bounded_pattern == (False, True, True, False)

    settling = sig((5, 3, 2, 2, 2, 2, 2, 2))
    out2 = sil.eventual_connectivity(settling)
    assert out2.settled and out2.k == 2
    _report("C7", "period-four signature rejected with period 4; settling head gives k=2")


def test_c08_boundary_probes():
    rng = np.random.default_rng(SEED)

    for domain in (UnitDisk(), RightHalfPlane(), HorizontalStrip()):
        for _ in range(1000):
            z = complex(sampling.sample_point(domain, rng))
            w = complex(sampling.sample_point(domain, rng))
            assert bd.harnack_check(domain, z, w).passed

    systems = (
        bd.make_inward_disk_system(),
        bd.make_alternating_disk_system(),
        bd.make_expanding_disk_system(),
    )
    for system in systems:
        for _ in range(100):
            z0 = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45))
            z1 = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45))
            assert bd.shadowing_check(system, z0, z1, 30).passed
    disk_example = bd.shadowing_check(systems[0], 0.0 + 0.0j, 0.5 + 0.0j, 30)
    assert disk_example.factor == pytest.approx(2.0 * math.log(3.0) * 9.0, abs=1e-12)

    ring = SymmetricAnnulus(math.e ** 2)
    hull = bd.topological_hull(ring)
    dom = annulus(ring.R)
    for _ in range(100):
        pts = sampling.sample_loop(ring.R, rng)
        assert bd.loop_length_bound(
            mm.SampledCurve(tuple(pts), closed=True), hull, dom
        ).passed

    cases = {
        "tower": (bd.make_tower_system(), bd.ConvergenceCase.STAYS_APART),
        "inward": (bd.make_inward_disk_system(), bd.ConvergenceCase.TO_BOUNDARY),
        "alternating": (bd.make_alternating_disk_system(), bd.ConvergenceCase.MIXED),
    }
    for name, (system, expected) in cases.items():
        trace = bd.delta_sequence(system, system.base_points[0], 30)
        assert bd.convergence_class(trace).case is expected, name
    _report(
        "C8",
        "3000 density sandwiches, 300 shadowing orbits (disk factor "
        f"{disk_example.factor:.3f}), 100 loop floors, (a)/(b)/(c) traces",
    )


def test_c09_cross_module_coherence():
    rng = np.random.default_rng(SEED)
    twr = tw.PowerTower(2.0, (2,) * 41)

    # level sets of the log-modulus ratio are exactly the circle leaves
    base = LogPolarPoint(0.5, 0.0)
    for _ in range(50):
        u = rng.uniform(-0.6, 0.6)
        a = LogPolarPoint(u, rng.uniform(0.0, 2.0 * math.pi))
        b = LogPolarPoint(u, rng.uniform(0.0, 2.0 * math.pi))
        assert tw.h_value(twr, a, base) == tw.h_value(twr, b, base)
        assert tw.classify_pair(a, b).tag is tw.PairTag.SAME_CIRCLE

    # the silhouette of the tower is trimodal, and the three behaviours the
    # verdict predicts are the three the traces realize
    sig = sil.ConnectivitySignature(((2, True),) * 9)
    moduli = sil.modulus_growth(SymmetricAnnulus(2.0).modulus(), (2,) * 8)
    verdict = sil.classify_silhouette(sig, moduli=moduli)
    assert verdict.kind is sil.DynamicsClass.TRIMODAL
    observed = set()
    for z, w in (
        sampling.sample_circle_pairs(2.0, 3, rng)
        + sampling.sample_ray_pairs(2.0, 3, rng)
        + sampling.sample_generic_pairs(2.0, 3, rng)
    ):
        observed.add(tw.trichotomy_report(twr, z, w, 20).verdict)
    assert observed == {
        tw.TrichotomyVerdict.CONTRACTING,
        tw.TrichotomyVerdict.ISOMETRIC,
        tw.TrichotomyVerdict.SEMI_CONTRACTING,
    }

    # and its hull-distance trace is the stays-apart case
    system = bd.make_tower_system()
    trace = bd.delta_sequence(system, 1.2 + 0.0j, 30)
    assert bd.convergence_class(trace).case is bd.ConvergenceCase.STAYS_APART
    _report("C9", "h level sets = circle leaves; trimodal verdict realized; case (a)")


def test_c10_cli_determinism(tmp_path):
    def suite(root):
        configs = [
            cli.ExperimentConfig(
                "trichotomy",
                seed=5,
                out=str(root / "trichotomy"),
                params={"R": 2.0, "pairs": 10, "trace_len": 20, "depth": 40},
            ),
            cli.ExperimentConfig(
                "modelmap",
                seed=5,
                out=str(root / "modelmap"),
                params={"r": 2.5, "eps": 1e-3, "samples": 2000, "resolution": 4096},
            ),
            cli.ExperimentConfig("silhouette", seed=5, out=str(root / "silhouette")),
            cli.ExperimentConfig(
                "boundary",
                seed=5,
                out=str(root / "boundary"),
                params={"pairs": 10, "harnack_pairs": 50, "loops": 10},
            ),
            cli.ExperimentConfig(
                "render", seed=5, out=str(root / "render"), params={"R": 2.0}
            ),
        ]
        for cfg in configs:
            report = cli.run(cfg)
            assert report.passed, f"{cfg.kind}: {report.failures()}"

    suite(tmp_path / "one")
    suite(tmp_path / "two")
    compared = 0
    for path in sorted((tmp_path / "one").rglob("*")):
        if path.is_file():
            twin = tmp_path / "two" / path.relative_to(tmp_path / "one")
            assert path.read_bytes() == twin.read_bytes(), path.name
            compared += 1
    assert compared >= 12
    _report("C10", f"two CLI suite runs, {compared} artifacts byte-identical")
