"""Connectivity arithmetic and the silhouette decision tables.

Covering maps between finitely connected domains obey
    c(U) - 2 = n (c(V) - 2) + delta,
with n the degree and delta the critical-point count; for connectivity
k >= 3 the only nonnegative-integer solution is the conformal one (1, 0).
Combined with how conformal moduli grow under degree-d coverings of annuli
(Mod multiplies by d), the eventual connectivity of a domain sequence pins
down its long-term internal metric behaviour, which this module encodes as
explicit decision tables over ConnectivitySignature inputs.

Infinite connectivity is the distinguished value math.inf, never a large
integer: the infinite branch of the covering dichotomy is symbolic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    InfeasibleSurgery,
    InfiniteDegree,
    InsufficientData,
    NoEventualConnectivity,
    OutOfScope,
    Unclassifiable,
)

INFINITE = math.inf


@dataclass(frozen=True)
class RHInstance:
    """One covering surgery: target connectivity, degree, critical count."""

    c_V: float
    degree: float
    delta: int

    def __post_init__(self):
        if self.c_V != INFINITE and (self.c_V < 1 or int(self.c_V) != self.c_V):
            raise ValueError(f"connectivity must be a positive integer or inf, got {self.c_V}")
        if self.degree != INFINITE and (self.degree < 1 or int(self.degree) != self.degree):
            raise ValueError(f"degree must be a positive integer or inf, got {self.degree}")
        if self.delta < 0:
            raise ValueError("critical-point count cannot be negative")


@dataclass(frozen=True)
class ConnectivitySignature:
    """Per-iterate (connectivity, bounded) observations of a domain orbit."""

    entries: tuple
    source: str = ""

    def __post_init__(self):
        normalized = []
        for conn, bounded in self.entries:
            if conn != INFINITE and (conn < 1 or int(conn) != conn):
                raise ValueError(f"connectivity must be >= 1 or inf, got {conn}")
            normalized.append((conn if conn == INFINITE else int(conn), bool(bounded)))
        object.__setattr__(self, "entries", tuple(normalized))

    def connectivities(self):
        return tuple(c for c, _ in self.entries)

    def bounded_flags(self):
        return tuple(b for _, b in self.entries)


class DynamicsClass(Enum):
    CONTRACTING = "Contracting"
    SEMI_CONTRACTING = "SemiContracting"
    EVENTUALLY_ISOMETRIC = "EventuallyIsometric"
    BIMODAL = "Bimodal"
    TRIMODAL = "Trimodal"


@dataclass(frozen=True)
class LaminationDescriptor:
    kind: str
    leaves: str


@dataclass(frozen=True)
class DynamicsVerdict:
    kind: DynamicsClass
    contracting: LaminationDescriptor | None = None
    isometric: LaminationDescriptor | None = None

    def __post_init__(self):
        if self.kind is DynamicsClass.TRIMODAL and not (self.contracting and self.isometric):
            raise ValueError("a trimodal verdict needs both lamination descriptors")
        if self.kind is DynamicsClass.BIMODAL and not self.contracting:
            raise ValueError("a bimodal verdict needs the contracting descriptor")

    def to_json(self) -> str:
        """Single-line JSON record for the CLI layer."""
        payload = {"class": self.kind.value}
        for name, desc in (("contracting", self.contracting), ("isometric", self.isometric)):
            if desc is not None:
                payload[name] = {"kind": desc.kind, "leaves": desc.leaves}
        return json.dumps(payload, sort_keys=True)


@dataclass(frozen=True)
class ConnectivityOutcome:
    """Either a settled value k, or a detected period (None if no pattern)."""

    k: float | None
    period: int | None
    bounded_pattern: tuple | None

    @property
    def settled(self) -> bool:
        return self.k is not None


# ---------------------------------------------------------------------------
# covering arithmetic
# ---------------------------------------------------------------------------

def riemann_hurwitz(inst: RHInstance) -> float:
    """Source connectivity of a finite-degree covering surgery."""
    if inst.degree == INFINITE:
        raise InfiniteDegree(
            "infinite-degree component: every target value is covered "
            "infinitely often, and target connectivity >= 3 forces an "
            "infinitely connected source"
        )
    if inst.c_V == INFINITE:
        return INFINITE
    c_U = int(inst.degree) * (int(inst.c_V) - 2) + inst.delta + 2
    if c_U < 1:
        raise InfeasibleSurgery(f"formula yields connectivity {c_U} < 1")
    return c_U


def feasible_degrees(k: int) -> set:
    """All (degree, delta) with k - 2 = degree (k - 2) + delta, k >= 3.

    Nonnegativity forces the unique conformal solution {(1, 0)}.
    """
    if k <= 2:
        raise OutOfScope(f"k = {k} <= 2: the equation no longer pins down the degree")
    solutions = set()
    for m in range(1, k):
        delta = (k - 2) - m * (k - 2)
        if delta >= 0:
            solutions.add((m, delta))
    return solutions


def modulus_growth(mod0: float, degrees) -> tuple:
    """Moduli D_n * mod0 forced by degree-d_n coverings, n = 0..len(degrees)."""
    if not mod0 > 0:
        raise ValueError("initial modulus must be positive")
    degrees = tuple(int(d) for d in degrees)
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be >= 1")
    out = [mod0]
    for d in degrees:
        out.append(out[-1] * d)
    return tuple(out)


# ---------------------------------------------------------------------------
# eventual connectivity
# ---------------------------------------------------------------------------

def _max_periodic_suffix(seq, p: int) -> int:
    """Length of the longest suffix with seq[i] == seq[i + p]."""
    n = len(seq)
    length = p
    for i in range(n - p - 1, -1, -1):
        if seq[i] == seq[i + p]:
            length += 1
        else:
            break
    return min(length, n)


def eventual_connectivity(sig: ConnectivitySignature) -> ConnectivityOutcome:
    """Settle the tail value of a connectivity sequence, or detect its period.

    A candidate period must repeat at least twice in full (at least four
    entries for a constant tail); with no such period the outcome reports
    period None rather than guessing.  A nonincreasing head before a constant
    tail is allowed, and detection is stable under prepending finitely many
    entries.
    """
    conns = sig.connectivities()
    n = len(conns)
    if n < 8:
        raise InsufficientData(f"need >= 8 entries for period detection, got {n}")
    for p in range(1, n // 2 + 1):
        length = _max_periodic_suffix(conns, p)
        if length >= max(2 * p, 4):
            if p == 1:
                tail_flags = set(sig.bounded_flags()[n - min(length, 4):])
                pattern = (tail_flags.pop(),) if len(tail_flags) == 1 else (None,)
                return ConnectivityOutcome(k=conns[-1], period=None, bounded_pattern=pattern)
            pattern = _phase_bounded_pattern(sig, p)
            return ConnectivityOutcome(k=None, period=p, bounded_pattern=pattern)
    return ConnectivityOutcome(k=None, period=None, bounded_pattern=None)


def _phase_bounded_pattern(sig: ConnectivitySignature, p: int):
    flags = sig.bounded_flags()
    n = len(flags)
    pattern = []
    for residue in range(p):
        tail = {flags[i] for i in range(residue, n) if i >= n - 2 * p and i % p == residue}
        pattern.append(tail.pop() if len(tail) == 1 else None)
    return tuple(pattern)


# ---------------------------------------------------------------------------
# the decision tables
# ---------------------------------------------------------------------------

_CIRCLE_LEAVES = LaminationDescriptor(
    kind="contracting",
    leaves="level curves of the invariant log-modulus ratio (circles in model coordinates)",
)
_RAY_LEAVES = LaminationDescriptor(
    kind="isometric",
    leaves="radial leaves transversal to the contracting family",
)
_HARMONIC_LEAVES = LaminationDescriptor(
    kind="contracting",
    leaves="level sets of the invariant positive harmonic escape-rate function",
)


def _moduli_shape(moduli) -> str:
    vals = tuple(float(m) for m in moduli)
    if len(vals) < 2:
        return "constant"
    lo, hi = min(vals), max(vals)
    if hi - lo <= 1e-12 * max(1.0, abs(hi)):
        return "constant"
    if all(vals[i + 1] >= vals[i] for i in range(len(vals) - 1)) and vals[-1] > vals[0]:
        return "divergent"
    return "irregular"


def classify_silhouette(
    sig: ConnectivitySignature,
    moduli=None,
    baker: bool = False,
) -> DynamicsVerdict:
    """Map geometry observations to an internal-dynamics verdict.

    Rows: eventual connectivity k >= 3 -> eventually isometric; k = 2 with
    constant moduli -> eventually isometric; k = 2 with moduli growing to
    infinity -> trimodal with transversal contracting and isometric leaf
    families; a direct-tract orbit (baker flag) is trimodal when its own
    connectivity is finite and bimodal when infinite.
    """
    if baker:
        c_first = sig.connectivities()[0]
        if c_first == INFINITE:
            return DynamicsVerdict(DynamicsClass.BIMODAL, contracting=_HARMONIC_LEAVES)
        return DynamicsVerdict(
            DynamicsClass.TRIMODAL, contracting=_HARMONIC_LEAVES, isometric=_RAY_LEAVES
        )

    outcome = eventual_connectivity(sig)
    if not outcome.settled:
        raise NoEventualConnectivity(
            f"no eventual connectivity (detected period: {outcome.period})",
            period=outcome.period,
        )
    k = outcome.k
    if k == INFINITE:
        raise Unclassifiable(
            "infinitely connected orbit without a direct-tract flag: "
            "no decision-table row applies"
        )
    if k >= 3:
        return DynamicsVerdict(DynamicsClass.EVENTUALLY_ISOMETRIC)
    if k == 2:
        if moduli is None:
            raise Unclassifiable("connectivity 2 needs modulus information")
        shape = _moduli_shape(moduli)
        if shape == "constant":
            return DynamicsVerdict(DynamicsClass.EVENTUALLY_ISOMETRIC)
        if shape == "divergent":
            return DynamicsVerdict(
                DynamicsClass.TRIMODAL, contracting=_CIRCLE_LEAVES, isometric=_RAY_LEAVES
            )
        raise Unclassifiable("non-monotone moduli at connectivity 2")
    raise Unclassifiable("simply connected orbit: outside this classifier's scope")
