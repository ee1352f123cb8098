"""Compositions of power maps between nested symmetric annuli.

The system: fix R > 1 and degrees (d_1, d_2, ...); stage n applies
z -> z^{d_n}, carrying A(R^{D_{n-1}}) onto A(R^{D_n}) with D_n = d_1...d_n.
In normalized log-polar coordinates (nu, theta) = (log|z| / log R, arg z)
the composite acts as theta -> D_n theta (mod 2 pi) while nu is invariant.

Angle bookkeeping is exact: the stored float theta is treated as an exact
rational, converted to turns, and reduced stage by stage with integer
arithmetic.  Colliding pairs (arguments differing by 2 pi j / D_k) therefore
land on bit-identical angles at stage k, and deep stages like D_n = 2^40
lose no precision to repeated multiplication.

Distances between stage-n images are computed in the universal cover of
A(R^{D_n}): the lifted heights y = (pi / (2 log R)) nu and the lifted
horizontal gap are stage-invariant, only the deck spacing
T_n = pi^2 / (D_n log R) shrinks.  The limit of the distance sequence for a
pair at distinct heights has the closed form |G(y_z) - G(y_w)| with
G(y) = log tan(y/2 + pi/4) the inverse Gudermannian; this derived formula is
always cross-checked against the continuum-infimum oracle in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import (
    AmbiguousClassification,
    DegenerateBasePoint,
    PointOutsideDomain,
    StageOutOfRange,
    VerdictMismatch,
)
from .hypgeo import LogPolarPoint, _acosh1p, circle_length

TWO_PI = 2.0 * math.pi
_TWO_PI_EXACT = Fraction(TWO_PI)

# Beyond this cumulative degree the deck spacing is below 1e-5 and discrete
# minimization is indistinguishable from the continuum infimum at our
# tolerances; pair_distance then switches to asymptotic mode.
ASYMPTOTIC_THRESHOLD = 10 ** 6


@dataclass(frozen=True)
class PowerTower:
    """Base annulus parameter R and the degree sequence, with exact D_n."""

    R: float
    degrees: tuple

    def __post_init__(self):
        if not self.R > 1.0:
            raise ValueError(f"need R > 1, got {self.R}")
        degrees = tuple(int(d) for d in self.degrees)
        if any(d < 1 for d in degrees):
            raise ValueError("all degrees must be >= 1")
        if not any(d >= 2 for d in degrees):
            raise ValueError("need at least one degree >= 2 for a nontrivial tower")
        object.__setattr__(self, "degrees", degrees)
        cumulative = [1]
        for d in degrees:
            cumulative.append(cumulative[-1] * d)
        object.__setattr__(self, "_cumulative", tuple(cumulative))

    @property
    def cumulative(self) -> tuple:
        """D_0 = 1, D_n = d_1 ... d_n as exact integers."""
        return self._cumulative

    @property
    def stages(self) -> int:
        return len(self.degrees)

    def log_R(self) -> float:
        return math.log(self.R)


@dataclass(frozen=True)
class TowerPoint:
    """Stage-n image in normalized coordinates: nu invariant, theta mod 2 pi."""

    nu: float
    theta: float
    stage: int

    def __post_init__(self):
        if not abs(self.nu) < 1.0:
            raise PointOutsideDomain(f"normalized log-modulus {self.nu} not in (-1, 1)")


class PairTag(Enum):
    SAME_CIRCLE = "SameCircle"
    SAME_RAY = "SameRay"
    GENERIC = "Generic"


@dataclass(frozen=True)
class PairClass:
    tag: PairTag
    tolerance: float


class TrichotomyVerdict(Enum):
    CONTRACTING = "Contracting"
    ISOMETRIC = "Isometric"
    SEMI_CONTRACTING = "SemiContracting"


@dataclass(frozen=True)
class TraceEntry:
    n: int
    cumulative_degree: int
    value: float
    bound: float
    asymptotic: bool = False


@dataclass(frozen=True)
class DistanceTrace:
    entries: tuple
    monotone: bool
    eventually_constant: bool
    limit_estimate: float

    def rows(self):
        """(n, D_n, d_n, bound) tuples for the CLI layer."""
        return [(e.n, e.cumulative_degree, e.value, e.bound) for e in self.entries]


@dataclass(frozen=True)
class TrichotomyReport:
    pair_class: PairClass
    verdict: TrichotomyVerdict
    trace: DistanceTrace
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# exact angle staging
# ---------------------------------------------------------------------------

def _turns(theta: float) -> Fraction:
    """Exact rational number of turns represented by a float angle."""
    return Fraction(theta) / _TWO_PI_EXACT


def _staged_turns(degrees, t: Fraction, n: int) -> Fraction:
    # theta_{k+1} = d_{k+1} theta_k  (mod 2 pi), carried out in turns where
    # every step is exact integer arithmetic.
    t %= 1
    for k in range(n):
        t = (degrees[k] * t) % 1
    return t


def _check_inside(tower: PowerTower, p: LogPolarPoint) -> None:
    if abs(p.u) >= tower.log_R():
        raise PointOutsideDomain(f"|log modulus| = {abs(p.u)} >= log R = {tower.log_R()}")


def _check_stage(tower: PowerTower, n: int) -> None:
    if not 0 <= n <= tower.stages:
        raise StageOutOfRange(f"stage {n} outside [0, {tower.stages}]")


def iterate(tower: PowerTower, z: LogPolarPoint, n: int) -> TowerPoint:
    """Stage-n image of z: (nu, D_n theta mod 2 pi, n)."""
    _check_inside(tower, z)
    _check_stage(tower, n)
    t = _staged_turns(tower.degrees, _turns(z.theta), n)
    return TowerPoint(nu=z.u / tower.log_R(), theta=float(t * _TWO_PI_EXACT), stage=n)


# ---------------------------------------------------------------------------
# pair classification
# ---------------------------------------------------------------------------

def _angular_gap(z: LogPolarPoint, w: LogPolarPoint) -> float:
    """Distance from theta_z - theta_w to the nearest multiple of 2 pi."""
    t = (_turns(z.theta) - _turns(w.theta)) % 1
    return float(min(t, 1 - t) * _TWO_PI_EXACT)


def classify_pair(z: LogPolarPoint, w: LogPolarPoint, tol: float = 0.0) -> PairClass:
    """Sort a pair into same-circle, same-ray, or generic position.

    Both near-degeneracies at once (while the points stay distinct) admit no
    stable answer and raise AmbiguousClassification; with tol = 0 that case
    cannot occur.
    """
    du = abs(z.u - w.u)
    dang = _angular_gap(z, w)
    if du <= tol and dang <= tol and (du != 0.0 or dang != 0.0):
        raise AmbiguousClassification(
            f"pair within tol={tol} of both a circle and a ray leaf"
        )
    if du <= tol:
        return PairClass(PairTag.SAME_CIRCLE, tol)
    if dang <= tol:
        return PairClass(PairTag.SAME_RAY, tol)
    return PairClass(PairTag.GENERIC, tol)


# ---------------------------------------------------------------------------
# distances along the tower
# ---------------------------------------------------------------------------

def _heights(tower: PowerTower, z: LogPolarPoint, w: LogPolarPoint):
    a = math.pi / (2.0 * tower.log_R())
    return a * z.u, a * w.u


def _stage_distance_from_residual(tower, z, w, residual_turns: float) -> float:
    # Strip distance at stage n: heights are stage-invariant, the horizontal
    # gap is the angular residual rescaled by pi / (2 log R).
    yz, yw = _heights(tower, z, w)
    s = residual_turns * math.pi ** 2 / tower.log_R()
    q = 2.0 * (math.sinh(s / 2.0) ** 2 + math.sin(abs(yz - yw) / 2.0) ** 2)
    return _acosh1p(q / (math.cos(yz) * math.cos(yw)))


def pair_distance(
    tower: PowerTower,
    z: LogPolarPoint,
    w: LogPolarPoint,
    n: int,
    mode: str = "auto",
) -> float:
    """d_{A(R^{D_n})} between the stage-n images of z and w.

    mode: "auto" switches to the continuum infimum once D_n exceeds
    ASYMPTOTIC_THRESHOLD; "exact" forces discrete deck minimization at any
    depth; "asymptotic" forces the infimum over real shifts.
    """
    _check_inside(tower, z)
    _check_inside(tower, w)
    _check_stage(tower, n)
    if mode not in ("auto", "exact", "asymptotic"):
        raise ValueError(f"unknown mode {mode!r}")
    D = tower.cumulative[n]
    asymptotic = mode == "asymptotic" or (mode == "auto" and D > ASYMPTOTIC_THRESHOLD)
    if asymptotic:
        residual = 0.0
    else:
        # residual in turns of the stage-n angular gap D_n (t_z - t_w) mod 1,
        # divided back by D_n: exact rational down to the final rounding
        frac = (D * (_turns(z.theta) - _turns(w.theta))) % 1
        residual = float(min(frac, 1 - frac) / D)
    return _stage_distance_from_residual(tower, z, w, residual)


def is_asymptotic_stage(tower: PowerTower, n: int) -> bool:
    _check_stage(tower, n)
    return tower.cumulative[n] > ASYMPTOTIC_THRESHOLD


def limit_distance(tower: PowerTower, z: LogPolarPoint, w: LogPolarPoint) -> float:
    """Limit c(z, w) of the stage distances: |G(y_z) - G(y_w)|.

    G(y) = log tan(y/2 + pi/4) = asinh(tan y) is the inverse Gudermannian;
    the value is the infimum over horizontal slides of the strip distance, the
    regime the deck spacing T_n -> 0 forces.
    """
    _check_inside(tower, z)
    _check_inside(tower, w)
    yz, yw = _heights(tower, z, w)
    return abs(math.asinh(math.tan(yz)) - math.asinh(math.tan(yw)))


def circle_collapse_bound(tower: PowerTower, r: float, n: int) -> float:
    """Length of the stage-n image circle traversed once: l_{A(R)}(C_r) / D_n."""
    _check_stage(tower, n)
    if not (1.0 / tower.R < r < tower.R):
        raise PointOutsideDomain(f"radius {r} outside A({tower.R})")
    ell = circle_length(tower.R, r)
    D = tower.cumulative[n]
    if D.bit_length() > 1000:
        return math.exp(math.log(ell) - D.bit_length() * math.log(2.0))
    return ell / float(D)


def upper_subannulus_distance(
    tower: PowerTower, z: LogPolarPoint, w: LogPolarPoint, n: int
) -> float:
    """Stage-n distance in {1 < |zeta| < R^{D_n}}, where log|zeta| is positive.

    This sub-annulus is conformally A(R^{D_n / 2}); in its strip coordinates
    the heights (pi / log R)(u - log R / 2) are stage-invariant and only the
    angular residual shrinks.  Both input points need positive log-modulus.
    """
    _check_inside(tower, z)
    _check_inside(tower, w)
    _check_stage(tower, n)
    if z.u <= 0.0 or w.u <= 0.0:
        raise PointOutsideDomain("both points must have modulus above 1")
    logR = tower.log_R()
    yz = (math.pi / logR) * (z.u - logR / 2.0)
    yw = (math.pi / logR) * (w.u - logR / 2.0)
    D = tower.cumulative[n]
    frac = (D * (_turns(z.theta) - _turns(w.theta))) % 1
    residual = float(min(frac, 1 - frac) / D)
    s = residual * 2.0 * math.pi ** 2 / logR
    q = 2.0 * (math.sinh(s / 2.0) ** 2 + math.sin(abs(yz - yw) / 2.0) ** 2)
    return _acosh1p(q / (math.cos(yz) * math.cos(yw)))


def h_value(tower: PowerTower, z: LogPolarPoint, z0: LogPolarPoint) -> float:
    """Ratio of iterate log-moduli, exact at every stage: u_z / u_{z0}.

    log|F_n z| = D_n u_z, so the defining limit is attained immediately and
    the value is invariant under advancing both points one stage.  Level sets
    are exactly the circle leaves.
    """
    _check_inside(tower, z)
    _check_inside(tower, z0)
    if z0.u == 0.0:
        raise DegenerateBasePoint("base point on the unit circle has log-modulus 0")
    return z.u / z0.u


# ---------------------------------------------------------------------------
# the trichotomy driver
# ---------------------------------------------------------------------------

def _trace(tower, z, w, N, mode="auto"):
    entries = []
    limit = limit_distance(tower, z, w)
    for n in range(N + 1):
        asym = mode == "asymptotic" or (
            mode == "auto" and tower.cumulative[n] > ASYMPTOTIC_THRESHOLD
        )
        d = pair_distance(tower, z, w, n, mode=mode)
        radius = math.exp(z.u)
        bound = circle_collapse_bound(tower, radius, n)
        entries.append(
            TraceEntry(n, tower.cumulative[n], d, bound, asymptotic=asym)
        )
    values = [e.value for e in entries]
    monotone = all(values[i + 1] <= values[i] + 1e-12 for i in range(len(values) - 1))
    tail = values[len(values) // 2 :]
    eventually_constant = max(tail) - min(tail) < 1e-10
    return DistanceTrace(tuple(entries), monotone, eventually_constant, limit)


def trichotomy_report(
    tower: PowerTower,
    z: LogPolarPoint,
    w: LogPolarPoint,
    N: int,
    tol: float = 0.0,
) -> TrichotomyReport:
    """Distance trace d_0..d_N, the pair class, and branch-specific checks.

    A failed branch check raises VerdictMismatch with diagnostics: the three
    behaviours are provable facts of this system, so a mismatch means the
    implementation (not the user) is wrong.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    _check_stage(tower, N)
    pair_class = classify_pair(z, w, tol)
    trace = _trace(tower, z, w, N)
    values = [e.value for e in trace.entries]
    d0, dN = values[0], values[-1]
    diag = {"d0": d0, "dN": dN, "limit": trace.limit_estimate}

    if pair_class.tag is PairTag.SAME_CIRCLE:
        bad = [
            (e.n, e.value, e.bound)
            for e in trace.entries
            if e.value > e.bound + 1e-9
        ]
        if bad:
            raise VerdictMismatch("circle pair exceeds the collapse bound", {"violations": bad})
        verdict = TrichotomyVerdict.CONTRACTING
    elif pair_class.tag is PairTag.SAME_RAY:
        dev = max(abs(v - d0) for v in values)
        diag["max_deviation"] = dev
        if dev >= 1e-10:
            raise VerdictMismatch("ray pair distance is not constant", diag)
        verdict = TrichotomyVerdict.ISOMETRIC
    else:
        limit = trace.limit_estimate
        if not trace.monotone:
            raise VerdictMismatch("generic pair trace is not nonincreasing", diag)
        # Per-step strictness can stall while the angular residual is already
        # below half the deck spacing; the decrease is strict overall and the
        # trace stays strictly above its limit.
        if not dN < d0:
            raise VerdictMismatch("generic pair trace failed to decrease", diag)
        if min(values) < limit - 1e-9:
            raise VerdictMismatch("generic pair trace dipped below its limit", diag)
        verdict = TrichotomyVerdict.SEMI_CONTRACTING

    return TrichotomyReport(pair_class, verdict, trace, diag)
