"""Reproducible experiment driver: TOML config in, CSV/JSON/SVG out.

Subcommands: trichotomy, modelmap, silhouette, boundary, render.  A run is
fully determined by its configuration and seed; artifacts are byte-identical
across repeated runs (SVG up to an embedded version comment, which is fixed
per release).  Exit status: 0 all checks passed, 1 check failures (with a
machine-readable failure list on stdout), 2 configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__, boundary, hypgeo, modelmap, sampling, silhouette, tower
from .errors import CheckFailed, ConfigError, WanderlabError

_EXPERIMENTS = ("trichotomy", "modelmap", "silhouette", "boundary", "render")

_DEFAULTS = {
    "trichotomy": {
        "R": None,               # required
        "degree": 2,
        "depth": 40,
        "trace_len": 20,
        "pairs": 50,
        "limit_stage": 40,
        "contract_ratio": 1e-4,  # d_N / d_0 bound for circle pairs; fits N = 20
    },
    "modelmap": {
        "r": None,               # required
        "eps": None,             # required
        "margin": 1.0,
        "stages": 2,
        "samples": 10_000,
        "resolution": 10_000,
    },
    "silhouette": {
        "k_min": 3,
        "k_max": 50,
    },
    "boundary": {
        "steps": 30,
        "pairs": 100,
        "loops": 100,
        "harnack_pairs": 1000,
        "threshold": 1e-6,
    },
    "render": {
        "R": None,               # required
        "circles": 7,
        "rays": 12,
    },
}


@dataclass
class ExperimentConfig:
    kind: str
    seed: int = 0
    out: str = "out"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _EXPERIMENTS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        defaults = _DEFAULTS[self.kind]
        unknown = set(self.params) - set(defaults)
        if unknown:
            raise ConfigError(f"unknown keys for {self.kind}: {sorted(unknown)}")
        merged = dict(defaults)
        merged.update(self.params)
        missing = [k for k, v in merged.items() if v is None]
        if missing:
            raise ConfigError(f"missing required keys for {self.kind}: {sorted(missing)}")
        self.params = merged

    def to_dict(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "out": self.out, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        extra = set(data) - {"kind", "seed", "out", "params"}
        if extra:
            raise ConfigError(f"unknown top-level keys: {sorted(extra)}")
        if "kind" not in data:
            raise ConfigError("config needs a 'kind'")
        return cls(
            kind=data["kind"],
            seed=int(data.get("seed", 0)),
            out=str(data.get("out", "out")),
            params=dict(data.get("params", {})),
        )


def load_config(path: str, kind: str | None = None) -> ExperimentConfig:
    """Read a TOML config: top-level kind/seed/out plus one table per kind."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    tables = {k: v for k, v in raw.items() if isinstance(v, dict)}
    scalars = {k: v for k, v in raw.items() if not isinstance(v, dict)}
    extra = set(scalars) - {"kind", "seed", "out"}
    if extra:
        raise ConfigError(f"unknown top-level keys: {sorted(extra)}")
    cfg_kind = scalars.get("kind", kind)
    if cfg_kind is None:
        raise ConfigError("config has no 'kind' and no subcommand was given")
    if kind is not None and cfg_kind != kind:
        raise ConfigError(f"config kind {cfg_kind!r} does not match subcommand {kind!r}")
    stray_tables = set(tables) - {cfg_kind}
    if stray_tables:
        raise ConfigError(f"unexpected tables: {sorted(stray_tables)}")
    return ExperimentConfig(
        kind=cfg_kind,
        seed=int(scalars.get("seed", 0)),
        out=str(scalars.get("out", "out")),
        params=tables.get(cfg_kind, {}),
    )


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)


@dataclass
class RunReport:
    kind: str
    checks: list
    config: dict
    version: str = __version__
    wall_clock: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c.name for c in self.checks if not c.passed]

    def artifact_dict(self) -> dict:
        # wall-clock and the artifact directory are volatile run plumbing and
        # stay out of written artifacts so identical runs give identical bytes
        return {
            "kind": self.kind,
            "version": self.version,
            "config": {k: v for k, v in self.config.items() if k != "out"},
            "checks": [asdict(c) for c in self.checks],
            "passed": self.passed,
        }


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def _write_lines(path: Path, lines) -> None:
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8", newline="\n")


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def export_csv(obj, path) -> None:
    """Headered CSV with 17 significant digits and LF line endings."""
    path = Path(path)
    if isinstance(obj, tower.DistanceTrace):
        header, rows = "n,Dn,dn,bound", obj.rows()
    elif isinstance(obj, boundary.BoundaryTrace):
        header, rows = "n,delta,wx,wy", obj.rows()
    elif isinstance(obj, tuple) and len(obj) == 2:
        header, rows = obj
    else:
        raise TypeError(f"no CSV layout for {type(obj).__name__}")
    lines = [header] + [",".join(_fmt(v) for v in row) for row in rows]
    _write_lines(path, lines)


# ---------------------------------------------------------------------------
# foliation rendering
# ---------------------------------------------------------------------------

def render_foliation(R: float, n_circles: int, n_rays: int, out) -> None:
    """SVG of A(R) with circle leaves (red) and ray leaves (blue).

    Circle radii are uniform in the inverse-Gudermannian height coordinate:
    G(pi log r_k / (2 log R)) is an arithmetic progression.
    """
    if not R > 1.0:
        raise ValueError("need R > 1")
    logR = math.log(R)
    size = 600.0
    scale = 0.45 * size / R
    mid = size / 2.0

    def px(x):
        return format(mid + scale * x, ".6f")

    def py(y):
        return format(mid - scale * y, ".6f")

    g_span = math.asinh(math.tan(0.45 * math.pi))
    if n_circles == 1:
        g_values = [0.0]
    else:
        g_values = list(np.linspace(-g_span, g_span, n_circles))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.0f} {size:.0f}">',
        f"<!-- wanderlab {__version__} -->",
        f'<rect width="{size:.0f}" height="{size:.0f}" fill="white"/>',
    ]
    for rho in (1.0 / R, R):
        lines.append(
            f'<circle class="domain-boundary" cx="{px(0)}" cy="{py(0)}" '
            f'r="{format(scale * rho, ".6f")}" fill="none" stroke="black" stroke-width="1.5"/>'
        )
    for g in g_values:
        y = math.atan(math.sinh(g))  # Gudermannian: strip height of the leaf
        rho = math.exp(2.0 * logR * y / math.pi)
        lines.append(
            f'<circle class="leaf-circle" cx="{px(0)}" cy="{py(0)}" '
            f'r="{format(scale * rho, ".6f")}" fill="none" stroke="red" stroke-width="1"/>'
        )
    r_in = math.exp(-0.97 * logR)
    r_out = math.exp(0.97 * logR)
    for j in range(n_rays):
        th = 2.0 * math.pi * j / n_rays
        c, s = math.cos(th), math.sin(th)
        lines.append(
            f'<line class="leaf-ray" x1="{px(r_in * c)}" y1="{py(r_in * s)}" '
            f'x2="{px(r_out * c)}" y2="{py(r_out * s)}" stroke="blue" stroke-width="1"/>'
        )
    lines.append("</svg>")
    _write_lines(Path(out), lines)


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------

def _run_trichotomy(cfg: ExperimentConfig, out: Path) -> RunReport:
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    twr = tower.PowerTower(float(p["R"]), (int(p["degree"]),) * int(p["depth"]))
    N = int(p["trace_len"])
    pairs = int(p["pairs"])
    samplers = {
        "SameCircle": sampling.sample_circle_pairs,
        "SameRay": sampling.sample_ray_pairs,
        "Generic": sampling.sample_generic_pairs,
    }
    csv_rows = []
    verdict_lines = []
    stats = {name: dict(count=0, verdict_ok=0) for name in samplers}
    worst = {"circle_ratio": 0.0, "ray_dev": 0.0, "limit_err": 0.0}
    limit_stage = min(int(p["limit_stage"]), twr.stages)
    for name, sampler in samplers.items():
        for idx, (z, w) in enumerate(sampler(twr.R, pairs, rng)):
            # classification tolerance 1e-12 at the CLI; exact zero stays the
            # programmatic default
            rep = tower.trichotomy_report(twr, z, w, N, tol=1e-12)
            stats[name]["count"] += 1
            expected = {
                "SameCircle": tower.TrichotomyVerdict.CONTRACTING,
                "SameRay": tower.TrichotomyVerdict.ISOMETRIC,
                "Generic": tower.TrichotomyVerdict.SEMI_CONTRACTING,
            }[name]
            if rep.verdict is expected:
                stats[name]["verdict_ok"] += 1
            values = [e.value for e in rep.trace.entries]
            if name == "SameCircle":
                deep = tower.pair_distance(twr, z, w, N, mode="exact")
                worst["circle_ratio"] = max(worst["circle_ratio"], deep / values[0])
            elif name == "SameRay":
                worst["ray_dev"] = max(
                    worst["ray_dev"], max(abs(v - values[0]) for v in values)
                )
            else:
                deep = tower.pair_distance(twr, z, w, limit_stage)
                worst["limit_err"] = max(
                    worst["limit_err"], abs(deep - rep.trace.limit_estimate)
                )
            pair_id = f"{name}-{idx}"
            for n, D, d, bound in rep.trace.rows():
                csv_rows.append((pair_id, name, n, D, d, bound))
            verdict_lines.append(
                json.dumps(
                    {
                        "pair": pair_id,
                        "class": rep.pair_class.tag.value,
                        "verdict": rep.verdict.value,
                        "d0": values[0],
                        "dN": values[-1],
                        "limit": rep.trace.limit_estimate,
                    },
                    sort_keys=True,
                )
            )
    export_csv(("pair,class,n,Dn,dn,bound", csv_rows), out / "traces.csv")
    _write_lines(out / "verdicts.json", verdict_lines)
    checks = [
        CheckResult(
            "circle-pairs-contract",
            stats["SameCircle"]["verdict_ok"] == pairs
            and worst["circle_ratio"] < float(p["contract_ratio"]),
            {"worst_ratio": worst["circle_ratio"]},
        ),
        CheckResult(
            "ray-pairs-isometric",
            stats["SameRay"]["verdict_ok"] == pairs and worst["ray_dev"] < 1e-10,
            {"worst_deviation": worst["ray_dev"]},
        ),
        CheckResult(
            "generic-pairs-semicontract",
            stats["Generic"]["verdict_ok"] == pairs and worst["limit_err"] < 1e-6,
            {"worst_limit_error": worst["limit_err"], "limit_stage": limit_stage},
        ),
    ]
    return RunReport("trichotomy", checks, cfg.to_dict())


def _run_modelmap(cfg: ExperimentConfig, out: Path) -> RunReport:
    p = cfg.params
    r, eps = float(p["r"]), float(p["eps"])
    resolution = int(p["resolution"])
    params = modelmap.generate_params(
        r, eps, float(p["margin"]), stages=int(p["stages"]), resolution=resolution
    )
    ineq = modelmap.params_report(params)
    containment = []
    for n in range(4 * params.stages):
        containment.append(
            modelmap.verify_containment(params, n, int(p["samples"]), resolution)
        )
    windings = {
        "cube-unit-circle": modelmap.winding_number(
            lambda z: z ** 3, modelmap.circle_curve(0.0, 1.0, 512), 0.0
        ),
        "phi-circle-3": modelmap.winding_number(
            modelmap.phi, modelmap.circle_curve(0.0, 3.0, 512), 0.0
        ),
        "phi-circle-half": modelmap.winding_number(
            modelmap.phi, modelmap.circle_curve(0.0, 0.5, 512), 0.0
        ),
    }
    audits = []
    for k in range(params.stages):
        audits.extend(modelmap.connectivity_audit(params, k))
    lines_ok = all(
        modelmap.line_region_disjoint(params, n) for n in range(4 * params.stages)
    )
    component = modelmap.trace_phi_component(r, eps, resolution)
    export_csv(
        ("x,y", [(z.real, z.imag) for z in component.polyline]),
        out / "phi_component.csv",
    )
    _render_overlay(params, component, out / "overlay.svg")
    expected_pattern = [(1, False), (2, True), (1, True), (1, False)] * params.stages
    pattern = [(a.expected_connectivity, a.expected_bounded) for a in audits]
    certification = {
        "params": {
            "r": params.r, "eps": params.eps, "lambda": params.lam,
            "R": params.R, "Rp": params.Rp, "delta": params.delta,
            "l": list(params.l), "m": list(params.m), "x": list(params.x),
            "stages": params.stages,
        },
        "inequalities": [{"name": n, "ok": ok} for n, ok in ineq],
        "epsilon_schedule": modelmap.epsilon_schedule(eps, 4 * params.stages),
        "containment": [
            {
                "stage": c.stage, "samples": c.samples,
                "min_clearance": c.min_clearance, "passed": c.passed,
            }
            for c in containment
        ],
        "windings": windings,
        "audits": [
            {
                "stage": a.stage,
                "bounded": a.expected_bounded,
                "connectivity": a.expected_connectivity,
                "passed": a.passed,
            }
            for a in audits
        ],
        "lines_disjoint": lines_ok,
    }
    _write_json(out / "certification.json", certification)
    checks = [
        CheckResult("params-valid", all(ok for _, ok in ineq), {"count": len(ineq)}),
        CheckResult(
            "containment-clearance",
            all(c.passed for c in containment),
            {"min_clearance": min(c.min_clearance for c in containment), "eps": eps},
        ),
        CheckResult(
            "winding-reference",
            windings["cube-unit-circle"] == 3
            and windings["phi-circle-3"] == -1
            and windings["phi-circle-half"] == 1,
            windings,
        ),
        CheckResult(
            "connectivity-pattern",
            all(a.passed for a in audits) and pattern == expected_pattern,
            {"pattern": pattern},
        ),
        CheckResult("lines-disjoint", lines_ok, {}),
    ]
    return RunReport("modelmap", checks, cfg.to_dict())


def _render_overlay(params, component, out_path: Path) -> None:
    """SVG sketch of the construction: regions, separating lines, poles."""
    span = params.l[-1] + 2.0
    width, height = 1000.0, 280.0
    sx = width / span
    mid = height / 2.0
    sy = sx

    def X(x):
        return format(x * sx, ".3f")

    def Y(y):
        return format(mid - y * sy, ".3f")

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f"<!-- wanderlab {__version__} -->",
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
    ]
    for n in range(4 * params.stages):
        reg = modelmap.region_G(params, n)
        if isinstance(reg, modelmap.VStripRegion):
            x0 = reg.center - reg.half_width
            lines.append(
                f'<rect x="{X(x0)}" y="0" width="{format(2 * reg.half_width * sx, ".3f")}" '
                f'height="{height:.0f}" fill="orange" fill-opacity="0.25"/>'
            )
        elif isinstance(reg, modelmap.AnnulusRegion):
            for rho in (reg.inner, reg.outer):
                lines.append(
                    f'<circle cx="{X(reg.center.real)}" cy="{Y(0)}" '
                    f'r="{format(rho * sx, ".3f")}" fill="none" stroke="orange"/>'
                )
        else:
            pts = " ".join(
                f"{X((reg.center + q).real)},{Y(q.imag)}" for q in reg.polyline[::16]
            )
            lines.append(f'<polyline points="{pts}" fill="none" stroke="orange"/>')
    for n in range(4 * params.stages):
        x = params.x[n]
        lines.append(
            f'<line x1="{X(x)}" y1="0" x2="{X(x)}" y2="{height:.0f}" '
            f'stroke="grey" stroke-dasharray="4 3"/>'
        )
    for pole in params.poles():
        lines.append(
            f'<circle cx="{X(pole.real)}" cy="{Y(pole.imag)}" r="3" fill="red"/>'
        )
    lines.append("</svg>")
    _write_lines(out_path, lines)


def _run_silhouette(cfg: ExperimentConfig, out: Path) -> RunReport:
    p = cfg.params
    k_lo, k_hi = int(p["k_min"]), int(p["k_max"])
    brute_ok = True
    for k in range(k_lo, k_hi + 1):
        brute = {
            (m, d)
            for m in range(1, 101)
            for d in range(0, 101)
            if k - 2 == m * (k - 2) + d
        }
        if silhouette.feasible_degrees(k) != brute or brute != {(1, 0)}:
            brute_ok = False

    periodic = silhouette.ConnectivitySignature(
        (((1, False), (2, True), (1, True), (1, False)) * 2), source="period-four"
    )
    outcome_periodic = silhouette.eventual_connectivity(periodic)
    settled = silhouette.ConnectivitySignature(
        ((5, True), (3, True)) + ((2, True),) * 6, source="settling"
    )
    outcome_settled = silhouette.eventual_connectivity(settled)

    rows = []
    const2 = silhouette.ConnectivitySignature(((2, True),) * 8)
    const4 = silhouette.ConnectivitySignature(((4, True),) * 8)
    inf_sig = silhouette.ConnectivitySignature(((silhouette.INFINITE, True),) * 8)
    doubling = silhouette.modulus_growth(2.0 * math.log(2.0), (2,) * 7)
    table = [
        ("k>=3", silhouette.classify_silhouette(const4), "EventuallyIsometric"),
        (
            "k=2 constant moduli",
            silhouette.classify_silhouette(const2, moduli=(1.0,) * 8),
            "EventuallyIsometric",
        ),
        (
            "k=2 growing moduli",
            silhouette.classify_silhouette(const2, moduli=doubling),
            "Trimodal",
        ),
        (
            "direct tract, finite connectivity",
            silhouette.classify_silhouette(const2, baker=True),
            "Trimodal",
        ),
        (
            "direct tract, infinite connectivity",
            silhouette.classify_silhouette(inf_sig, baker=True),
            "Bimodal",
        ),
    ]
    table_ok = True
    for label, verdict, expected in table:
        ok = verdict.kind.value == expected
        table_ok = table_ok and ok
        rows.append(json.dumps({"row": label, "expected": expected} | json.loads(verdict.to_json()), sort_keys=True))
    rows.append(
        json.dumps(
            {
                "row": "eventual-connectivity period-four",
                "period": outcome_periodic.period,
                "settled": outcome_periodic.settled,
            },
            sort_keys=True,
        )
    )
    rows.append(
        json.dumps(
            {"row": "eventual-connectivity settling", "k": outcome_settled.k},
            sort_keys=True,
        )
    )
    _write_lines(out / "verdicts.json", rows)
    checks = [
        CheckResult("feasible-degrees-bruteforce", brute_ok, {"k_range": [k_lo, k_hi]}),
        CheckResult(
            "no-eventual-connectivity-period",
            (not outcome_periodic.settled) and outcome_periodic.period == 4,
            {"period": outcome_periodic.period},
        ),
        CheckResult(
            "eventual-connectivity-settles",
            outcome_settled.settled and outcome_settled.k == 2,
            {"k": outcome_settled.k},
        ),
        CheckResult("decision-table", table_ok, {"rows": len(table)}),
    ]
    return RunReport("silhouette", checks, cfg.to_dict())


def _run_boundary(cfg: ExperimentConfig, out: Path) -> RunReport:
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    steps = int(p["steps"])
    threshold = float(p["threshold"])

    systems = {
        "tower": boundary.make_tower_system(length=max(steps + 2, 32)),
        "inward": boundary.make_inward_disk_system(),
        "alternating": boundary.make_alternating_disk_system(),
        "expanding": boundary.make_expanding_disk_system(cap=max(steps + 2, 40)),
    }
    expected_case = {
        "tower": boundary.ConvergenceCase.STAYS_APART,
        "inward": boundary.ConvergenceCase.TO_BOUNDARY,
        "alternating": boundary.ConvergenceCase.MIXED,
    }
    cases = {}
    for name in ("tower", "inward", "alternating"):
        system = systems[name]
        trace = boundary.delta_sequence(system, system.base_points[0], steps)
        export_csv(trace, out / f"trace_{name}.csv")
        cases[name] = boundary.convergence_class(trace, threshold).case
    classes_ok = all(cases[name] is expected_case[name] for name in expected_case)

    harnack_pairs = int(p["harnack_pairs"])
    harnack_ok = True
    for domain in (hypgeo.UnitDisk(), hypgeo.RightHalfPlane(), hypgeo.HorizontalStrip()):
        for _ in range(harnack_pairs):
            z = complex(sampling.sample_point(domain, rng))
            w = complex(sampling.sample_point(domain, rng))
            if not boundary.harnack_check(domain, z, w).passed:
                harnack_ok = False

    pair_count = int(p["pairs"])
    shadow_ok = True
    max_ratio = 0.0
    disk = hypgeo.UnitDisk()
    for name in ("inward", "alternating", "expanding"):
        system = systems[name]
        for _ in range(pair_count):
            z0 = complex(sampling.sample_point(disk, rng)) * 0.6
            z1 = complex(sampling.sample_point(disk, rng)) * 0.6
            rep = boundary.shadowing_check(system, z0, z1, steps)
            shadow_ok = shadow_ok and rep.passed
            max_ratio = max(max_ratio, rep.max_ratio)
    disk_example = boundary.shadowing_check(
        systems["inward"], 0.0 + 0.0j, 0.5 + 0.0j, steps
    )
    factor_expected = 2.0 * math.log(3.0) * 9.0
    shadow_ok = shadow_ok and abs(disk_example.factor - factor_expected) < 1e-9

    loops = int(p["loops"])
    ring = hypgeo.SymmetricAnnulus(math.e ** 2)
    hull = boundary.topological_hull(ring)
    domain = hypgeo.Annulus(ring)
    loops_ok = True
    for _ in range(loops):
        pts = sampling.sample_loop(ring.R, rng)
        curve = modelmap.SampledCurve(tuple(pts), closed=True)
        if not boundary.loop_length_bound(curve, hull, domain).passed:
            loops_ok = False

    _write_json(
        out / "probes.json",
        {
            "cases": {k: v.value for k, v in cases.items()},
            "shadowing_max_ratio": max_ratio,
            "disk_example_factor": disk_example.factor,
        },
    )
    checks = [
        CheckResult(
            "convergence-classes",
            classes_ok,
            {name: case.value for name, case in cases.items()},
        ),
        CheckResult("harnack-sandwich", harnack_ok, {"pairs": harnack_pairs}),
        CheckResult(
            "shadowing-bound",
            shadow_ok,
            {"max_ratio": max_ratio, "disk_factor": disk_example.factor},
        ),
        CheckResult("loop-length-floor", loops_ok, {"loops": loops}),
    ]
    return RunReport("boundary", checks, cfg.to_dict())


def _run_render(cfg: ExperimentConfig, out: Path) -> RunReport:
    p = cfg.params
    path = out / "foliation.svg"
    render_foliation(float(p["R"]), int(p["circles"]), int(p["rays"]), path)
    text = path.read_text(encoding="utf-8")
    checks = [
        CheckResult(
            "foliation-structure",
            text.count('class="leaf-circle"') == int(p["circles"])
            and text.count('class="leaf-ray"') == int(p["rays"]),
            {"circles": int(p["circles"]), "rays": int(p["rays"])},
        )
    ]
    return RunReport("render", checks, cfg.to_dict())


_RUNNERS = {
    "trichotomy": _run_trichotomy,
    "modelmap": _run_modelmap,
    "silhouette": _run_silhouette,
    "boundary": _run_boundary,
    "render": _run_render,
}


def run(cfg: ExperimentConfig, check_fast: bool = False) -> RunReport:
    """Execute one experiment; writes artifacts into cfg.out."""
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()
    report = _RUNNERS[cfg.kind](cfg, out)
    report.wall_clock = time.monotonic() - started
    _write_json(out / "report.json", report.artifact_dict())
    if check_fast and not report.passed:
        raise CheckFailed("checks failed", failures=report.failures())
    return report


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wanderlab", description=__doc__)
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in _EXPERIMENTS:
        sp = sub.add_parser(kind)
        sp.add_argument("--config", default=None, help="TOML experiment configuration")
        sp.add_argument("--seed", type=int, default=None, help="override the config seed")
        sp.add_argument("--out", default=None, help="artifact directory")
        sp.add_argument(
            "--check", action="store_true", help="fail fast on the first failed check"
        )
    args = parser.parse_args(argv)
    try:
        if args.config is not None:
            cfg = load_config(args.config, args.kind)
        else:
            cfg = ExperimentConfig(kind=args.kind)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out is not None:
            cfg.out = args.out
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    try:
        report = run(cfg, check_fast=args.check)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    except CheckFailed as exc:
        print(json.dumps({"passed": False, "failures": exc.failures}))
        return 1
    except WanderlabError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    summary = {
        "kind": report.kind,
        "passed": report.passed,
        "failures": report.failures(),
        "wall_clock_seconds": round(report.wall_clock, 3),
        "out": cfg.out,
    }
    print(json.dumps(summary, sort_keys=True))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
