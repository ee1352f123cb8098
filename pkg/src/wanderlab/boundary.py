"""Distance-to-outer-boundary probes for domain orbits.

The outer boundary of a region is the boundary of its topological convex
hull (the region plus its bounded complementary components).  An orbit's
trace of hull-boundary distances delta_n, together with nearest-point
witnesses, feeds an empirical three-way classifier: bounded away from the
boundary, mixed subsequences, or convergence to the boundary.  The finite
trace never decides a liminf, so the classifier keeps an explicit
inconclusive outcome and records its threshold and window.

The quantitative side packages two proven inequalities as bug detectors:
the density ratio sandwich exp(-2d) <= rho(z)/rho(w) <= exp(2d) on simply
connected domains, and the orbit-shadowing bound
|f^n(z0) - f^n(z1)| <= 2 C e^{2C} delta_n with C the starting hyperbolic
distance.  A violation is an implementation bug, never user error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import hypgeo, modelmap
from .errors import (
    BoundViolated,
    OrbitEscapedDomain,
    PointOutsideDomain,
    UnsupportedRegion,
)
from .hypgeo import (
    Annulus,
    CanonicalDomain,
    HorizontalStrip,
    PolylinePath,
    RightHalfPlane,
    SymmetricAnnulus,
    UnitDisk,
)
from .tower import LogPolarPoint, PowerTower, upper_subannulus_distance


# ---------------------------------------------------------------------------
# hulls
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolygonWithHoles:
    outer: tuple
    holes: tuple = ()


class _HullShape:
    def nearest(self, z: complex):
        """(distance to the hull boundary, nearest boundary point)."""
        raise NotImplementedError


@dataclass(frozen=True)
class DiskHull(_HullShape):
    center: complex
    radius: float

    def nearest(self, z):
        w = complex(z) - self.center
        if w == 0:
            return self.radius, self.center + self.radius
        return self.radius - abs(w), self.center + self.radius * w / abs(w)


@dataclass(frozen=True)
class HStripHull(_HullShape):
    """Horizontal strip {|Im z| < half_width}; boundary is two lines."""

    half_width: float

    def nearest(self, z):
        z = complex(z)
        edge = self.half_width if z.imag >= 0 else -self.half_width
        return self.half_width - abs(z.imag), complex(z.real, edge)


@dataclass(frozen=True)
class VStripHull(_HullShape):
    center: float
    half_width: float

    def nearest(self, z):
        z = complex(z)
        off = z.real - self.center
        edge = self.center + (self.half_width if off >= 0 else -self.half_width)
        return self.half_width - abs(off), complex(edge, z.imag)


@dataclass(frozen=True)
class HalfPlaneHull(_HullShape):
    """{Re z <= limit} when side = "left", {Re z >= limit} when "right"."""

    limit: float
    side: str = "left"

    def nearest(self, z):
        z = complex(z)
        gap = self.limit - z.real if self.side == "left" else z.real - self.limit
        return gap, complex(self.limit, z.imag)


@dataclass(frozen=True)
class PolygonHull(_HullShape):
    vertices: tuple

    def nearest(self, z):
        z = complex(z)
        pts = np.asarray(self.vertices, dtype=complex)
        a = pts
        b = np.roll(pts, -1)
        seg = b - a
        L2 = np.abs(seg) ** 2
        t = np.zeros(len(pts))
        nz = L2 > 0
        t[nz] = np.clip(((z - a) * np.conj(seg)).real[nz] / L2[nz], 0.0, 1.0)
        proj = a + t * seg
        d = np.abs(z - proj)
        i = int(np.argmin(d))
        return float(d[i]), complex(proj[i])


@dataclass(frozen=True)
class HullDomain:
    """A base region together with its filled (simply connected) hull."""

    base_kind: str
    base_contains: object
    hull: _HullShape

    def boundary_distance(self, z: complex):
        return self.hull.nearest(z)


def topological_hull(region) -> HullDomain:
    """Fill the bounded complementary components of a supported region."""
    if isinstance(region, SymmetricAnnulus):
        region = Annulus(region)
    if isinstance(region, Annulus):
        R = region.ring.R
        return HullDomain(
            "annulus",
            lambda z: 1.0 / R < abs(z) < R,
            DiskHull(0.0 + 0.0j, R),
        )
    if isinstance(region, UnitDisk):
        return HullDomain("disk", lambda z: abs(z) < 1.0, DiskHull(0.0 + 0.0j, 1.0))
    if isinstance(region, HorizontalStrip):
        return HullDomain(
            "strip",
            lambda z: abs(complex(z).imag) < math.pi / 2.0,
            HStripHull(math.pi / 2.0),
        )
    if isinstance(region, RightHalfPlane):
        return HullDomain(
            "half-plane",
            lambda z: complex(z).real > 0.0,
            HalfPlaneHull(0.0, side="right"),
        )
    if isinstance(region, modelmap.AnnulusRegion):
        return HullDomain(
            "annulus",
            region.contains,
            DiskHull(region.center, region.outer),
        )
    if isinstance(region, modelmap.DiskRegion):
        return HullDomain("disk", region.contains, DiskHull(region.center, region.radius))
    if isinstance(region, modelmap.VStripRegion):
        return HullDomain(
            "strip",
            region.contains,
            VStripHull(region.center, region.half_width),
        )
    if isinstance(region, modelmap.HalfPlaneRegion):
        return HullDomain("half-plane", region.contains, HalfPlaneHull(region.limit))
    if isinstance(region, modelmap.PhiPreimageRegion):
        pts = tuple(region.center + p for p in region.polyline)
        return HullDomain("component", region.contains, PolygonHull(pts))
    if isinstance(region, PolygonWithHoles):
        outer = tuple(complex(v) for v in region.outer)
        holes = tuple(tuple(complex(v) for v in h) for h in region.holes)

        def inside(z):
            z = complex(z)
            if not _point_in_polygon(z, outer):
                return False
            return not any(_point_in_polygon(z, h) for h in holes)

        return HullDomain("polygon", inside, PolygonHull(outer))
    raise UnsupportedRegion(f"no hull support for {type(region).__name__}")


def _point_in_polygon(z: complex, vertices) -> bool:
    inside = False
    n = len(vertices)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        if (a.imag > z.imag) != (b.imag > z.imag):
            x = a.real + (z.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
            if z.real < x:
                inside = not inside
    return inside


# ---------------------------------------------------------------------------
# orbits over synthetic systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryEntry:
    n: int
    delta: float
    witness: complex


@dataclass(frozen=True)
class BoundaryTrace:
    entries: tuple
    label: str = ""

    def deltas(self):
        return tuple(e.delta for e in self.entries)

    def rows(self):
        """(n, delta, wx, wy) rows for CSV emission."""
        return [(e.n, e.delta, e.witness.real, e.witness.imag) for e in self.entries]


@dataclass(frozen=True)
class SyntheticSystem:
    """A domain orbit with per-stage holomorphic maps and marked base points."""

    label: str
    domain_at: object          # n -> HullDomain
    map_at: object             # (n, z) -> z'
    start_domain: CanonicalDomain
    base_points: tuple


def make_tower_system(R: float = 1.5, doubling: int = 5, length: int = 32) -> SyntheticSystem:
    """Power maps on growing annuli; distances to the hull grow without bound.

    Degrees taper to 1 after `doubling` steps to keep R^{D_n} within floating
    range; the hull-distance trace is already far above any threshold.
    """
    degrees = (2,) * doubling + (1,) * (length - doubling)
    cumulative = [1]
    for d in degrees:
        cumulative.append(cumulative[-1] * d)

    def domain_at(n):
        return topological_hull(SymmetricAnnulus(R ** cumulative[n]))

    def map_at(n, z):
        return z ** degrees[n]

    return SyntheticSystem(
        "tower", domain_at, map_at, hypgeo.annulus(R), (1.2 + 0.0j, 1.1 + 0.3j)
    )


_UNIT_DISK_HULL = HullDomain("disk", lambda z: abs(z) < 1.0, DiskHull(0.0 + 0.0j, 1.0))


def _affine_disk_system(label, targets):
    """Affine contractions of the unit disk with a prescribed marked orbit."""

    def domain_at(n):
        return _UNIT_DISK_HULL

    def map_at(n, z):
        a, b = targets(n), targets(n + 1)
        scale = 0.9 * (1.0 - abs(b)) / (1.0 + abs(a))
        return b + scale * (z - a)

    return SyntheticSystem(label, domain_at, map_at, UnitDisk(), (0.0 + 0.0j, 0.5 + 0.0j))


def make_inward_disk_system() -> SyntheticSystem:
    """Marked orbit 1 - 2^{-n}: hull distances halve forever (convergence)."""
    return _affine_disk_system("inward", lambda n: 1.0 - 0.5 ** n)


def make_alternating_disk_system() -> SyntheticSystem:
    """Hull distances 2^{-n} on even steps but 1/2 on odd steps (mixed)."""
    return _affine_disk_system(
        "alternating", lambda n: (1.0 - 0.5 ** n) if n % 2 == 0 else 0.5
    )


def make_expanding_disk_system(factor: float = 2.0, cap: int = 40) -> SyntheticSystem:
    """Dilations between growing disks: hull distances grow geometrically."""

    def domain_at(n):
        radius = factor ** min(n, cap)
        return HullDomain(
            "disk", lambda z, R=radius: abs(z) < R, DiskHull(0.0 + 0.0j, radius)
        )

    def map_at(n, z):
        return z * (factor if n < cap else 1.0)

    return SyntheticSystem(
        "expanding", domain_at, map_at, UnitDisk(), (0.25 + 0.0j, -0.3 + 0.2j)
    )


def delta_sequence(system: SyntheticSystem, z0: complex, N: int) -> BoundaryTrace:
    """Iterate the marked point and record delta_n with nearest witnesses."""
    z = complex(z0)
    entries = []
    for n in range(N + 1):
        dom = system.domain_at(n)
        if not dom.base_contains(z):
            raise OrbitEscapedDomain(f"iterate {n} left its region in system {system.label}")
        delta, witness = dom.boundary_distance(z)
        entries.append(BoundaryEntry(n, float(delta), complex(witness)))
        if n < N:
            z = complex(system.map_at(n, z))
    return BoundaryTrace(tuple(entries), label=system.label)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

class ConvergenceCase(Enum):
    STAYS_APART = "a"
    MIXED = "b"
    TO_BOUNDARY = "c"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ConvergenceReport:
    case: ConvergenceCase
    below_indices: tuple
    above_indices: tuple
    threshold: float
    window_start: int


def convergence_class(trace: BoundaryTrace, threshold: float = 1e-6) -> ConvergenceReport:
    """Empirical call on a finite trace; Inconclusive is an allowed outcome.

    Tail statistics use the last quarter of the trace.  Case (a) needs the
    whole tail above the threshold; case (c) needs it below with a downward
    trend over the full trace; case (b) needs both a sub-threshold and a
    bounded-below subsequence, each persistent (at least two tail members).
    """
    deltas = trace.deltas()
    if len(deltas) < 10:
        raise ValueError("need a trace of length >= 10")
    start = len(deltas) - max(3, len(deltas) // 4)
    tail = list(enumerate(deltas))[start:]
    below = tuple(n for n, d in tail if d <= threshold)
    above = tuple(n for n, d in tail if d > threshold)
    if not below:
        return ConvergenceReport(ConvergenceCase.STAYS_APART, below, above, threshold, start)
    if not above:
        half = len(deltas) // 2
        trending_down = float(np.median(deltas[half:])) <= float(np.median(deltas[:half]))
        if trending_down:
            return ConvergenceReport(
                ConvergenceCase.TO_BOUNDARY, below, above, threshold, start
            )
        return ConvergenceReport(ConvergenceCase.INCONCLUSIVE, below, above, threshold, start)
    if len(below) >= 2 and len(above) >= 2:
        return ConvergenceReport(ConvergenceCase.MIXED, below, above, threshold, start)
    return ConvergenceReport(ConvergenceCase.INCONCLUSIVE, below, above, threshold, start)


# ---------------------------------------------------------------------------
# quantitative bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShadowingReport:
    separation: float
    factor: float
    max_ratio: float
    final_witness_gap: float
    passed: bool


def shadowing_check(system: SyntheticSystem, z0: complex, z1: complex, N: int) -> ShadowingReport:
    """Verify |f^n(z0) - f^n(z1)| <= 2 C e^{2C} delta_n(f^n(z0)) for n <= N.

    C is the starting hyperbolic distance; the same sweep confirms that the
    companion orbit shadows the boundary witnesses of the marked orbit.
    """
    C = hypgeo.distance(system.start_domain, z0, z1)
    factor = 2.0 * C * math.exp(2.0 * C)
    trace = delta_sequence(system, z0, N)
    a, b = complex(z0), complex(z1)
    max_ratio = 0.0
    witness_gap = 0.0
    for n, entry in enumerate(trace.entries):
        gap = abs(a - b)
        bound = factor * entry.delta
        if gap > bound * (1.0 + 1e-9) + 1e-12:
            raise BoundViolated(
                f"stage {n}: |f^n z0 - f^n z1| = {gap} > {bound} in system {system.label}"
            )
        if bound > 0.0:
            max_ratio = max(max_ratio, gap / bound)
        witness_gap = abs(b - entry.witness)
        if witness_gap > gap + entry.delta + 1e-9 * (1.0 + entry.delta):
            raise BoundViolated(f"stage {n}: witness shadowing failed in {system.label}")
        if n < N:
            a = complex(system.map_at(n, a))
            b = complex(system.map_at(n, b))
    return ShadowingReport(C, factor, max_ratio, witness_gap, True)


@dataclass(frozen=True)
class HarnackReport:
    ratio: float
    lower: float
    upper: float
    passed: bool


def harnack_check(domain: CanonicalDomain, z: complex, w: complex) -> HarnackReport:
    """Density ratio sandwich on a simply connected canonical domain."""
    if isinstance(domain, Annulus):
        raise UnsupportedRegion("the sandwich needs a simply connected domain")
    d = hypgeo.distance(domain, z, w)
    ratio = hypgeo.density(domain, z) / hypgeo.density(domain, w)
    lower = math.exp(-2.0 * d)
    upper = math.exp(2.0 * d)
    slack = 1e-12 * (1.0 + upper)
    passed = lower - slack <= ratio <= upper + slack
    if not passed:
        raise BoundViolated(f"density ratio {ratio} outside [{lower}, {upper}]")
    return HarnackReport(ratio, lower, upper, passed)


@dataclass(frozen=True)
class LoopLengthReport:
    hyperbolic_length: float
    euclidean_length: float
    max_hull_distance: float
    lower_bound: float
    passed: bool


def loop_length_bound(
    curve: modelmap.SampledCurve, hull: HullDomain, domain: CanonicalDomain
) -> LoopLengthReport:
    """Check l_hyp >= l_euclid / (2 max hull-boundary distance along the curve)."""
    pts = curve.points
    l_hyp = hypgeo.path_length(PolylinePath(pts, domain))
    arr = np.asarray(pts, dtype=complex)
    l_euc = float(np.abs(np.diff(arr)).sum())
    max_dist = max(hull.boundary_distance(z)[0] for z in pts)
    if max_dist <= 0.0:
        raise PointOutsideDomain("curve touches or exits the hull")
    bound = l_euc / (2.0 * max_dist)
    passed = l_hyp >= bound * (1.0 - 1e-9)
    if not passed:
        raise BoundViolated(f"hyperbolic length {l_hyp} below the floor {bound}")
    return LoopLengthReport(l_hyp, l_euc, max_dist, bound, passed)


@dataclass(frozen=True)
class WitnessBoundReport:
    log_ratio: float
    distance: float
    passed: bool


def harmonic_witness_check(
    tower: PowerTower, z: LogPolarPoint, w: LogPolarPoint, n: int
) -> WitnessBoundReport:
    """Lower-bound the stage distance by one positive harmonic witness.

    On the sub-annulus {1 < |zeta| < R^{D_n}} the function log|zeta| is
    positive and harmonic, so |log(u_z / u_w)| is at most the sub-annulus
    distance between the stage-n images.  Both points need modulus above 1.
    """
    log_ratio = abs(math.log(z.u / w.u)) if z.u > 0 and w.u > 0 else math.inf
    d = upper_subannulus_distance(tower, z, w, n)
    passed = log_ratio <= d + 1e-9 * (1.0 + d)
    if not passed:
        raise BoundViolated(f"harmonic witness {log_ratio} exceeds distance {d}")
    return WitnessBoundReport(log_ratio, d, passed)
