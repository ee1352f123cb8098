"""Hyperbolic geometry on four canonical domains.

All densities use the curvature -1 normalization:

    unit disk        rho(z) = 2 / (1 - |z|^2)
    right half-plane rho(z) = 1 / Re z
    horizontal strip rho(z) = 1 / cos(Im z)      on {|Im z| < pi/2}
    symmetric annulus A(R) = {1/R < |z| < R}:
                     rho(z) = (pi / (2 log R)) / (|z| cos(pi log|z| / (2 log R)))

Distances on the simply connected domains are closed forms; the annulus
distance lifts both points to the strip through the universal cover and
minimizes over deck translates (spacing pi^2 / log R).  ``path_length``
integrates a density along a polyline by adaptive Gauss-Legendre quadrature
and serves as the independent oracle for every distance routine.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidWinding, PointOutsideDomain

BOUNDARY_MARGIN = 1e-12

# Gauss-Legendre nodes/weights on [0, 1], orders 7 and 15 (embedded error pair).
_GL7_X, _GL7_W = np.polynomial.legendre.leggauss(7)
_GL7_X = 0.5 * (_GL7_X + 1.0)
_GL7_W = 0.5 * _GL7_W
_GL15_X, _GL15_W = np.polynomial.legendre.leggauss(15)
_GL15_X = 0.5 * (_GL15_X + 1.0)
_GL15_W = 0.5 * _GL15_W


# ---------------------------------------------------------------------------
# domain and point types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricAnnulus:
    """The round annulus {1/R < |z| < R}, conformal modulus 2 log R."""

    R: float

    def __post_init__(self):
        if not (math.isfinite(self.R) and self.R > 1.0):
            raise ValueError(f"annulus parameter must satisfy R > 1, got {self.R}")

    def modulus(self) -> float:
        return 2.0 * math.log(self.R)


@dataclass(frozen=True)
class UnitDisk:
    pass


@dataclass(frozen=True)
class RightHalfPlane:
    pass


@dataclass(frozen=True)
class HorizontalStrip:
    """The strip {|Im z| < pi/2}; fixed width so exp maps it onto Re z > 0."""


@dataclass(frozen=True)
class Annulus:
    ring: SymmetricAnnulus


CanonicalDomain = UnitDisk | RightHalfPlane | HorizontalStrip | Annulus


def annulus(R: float) -> Annulus:
    return Annulus(SymmetricAnnulus(R))


@dataclass(frozen=True)
class LogPolarPoint:
    """A nonzero complex number as (log-modulus, argument branch).

    ``theta`` is a chosen branch of the argument and is never silently
    normalized: the branch carries winding information.
    """

    u: float
    theta: float

    @classmethod
    def from_complex(cls, z: complex) -> "LogPolarPoint":
        if z == 0 or not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise PointOutsideDomain(f"log-polar coordinates undefined at {z}")
        return cls(math.log(abs(z)), math.atan2(z.imag, z.real))

    def to_complex(self) -> complex:
        return cmath.rect(math.exp(self.u), self.theta)


@dataclass(frozen=True)
class PolylinePath:
    """An ordered polyline strictly inside a canonical domain."""

    vertices: tuple
    ambient: CanonicalDomain

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise ValueError("a polyline needs at least 2 vertices")
        for v in self.vertices:
            _require_inside(self.ambient, complex(v))


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def boundary_gap(domain: CanonicalDomain, z: complex) -> float:
    """Euclidean distance from z to the domain boundary (negative outside)."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return -math.inf
    if isinstance(domain, UnitDisk):
        return 1.0 - abs(z)
    if isinstance(domain, RightHalfPlane):
        return z.real
    if isinstance(domain, HorizontalStrip):
        return math.pi / 2.0 - abs(z.imag)
    if isinstance(domain, Annulus):
        R = domain.ring.R
        return min(abs(z) - 1.0 / R, R - abs(z))
    raise TypeError(f"not a canonical domain: {domain!r}")


def contains(domain: CanonicalDomain, z: complex, margin: float = BOUNDARY_MARGIN) -> bool:
    return boundary_gap(domain, z) > margin


def _require_inside(domain: CanonicalDomain, z: complex) -> None:
    # Points within BOUNDARY_MARGIN of the boundary are rejected rather than
    # extrapolated: the density blows up there.
    if not contains(domain, z):
        raise PointOutsideDomain(f"{z} is not strictly inside {type(domain).__name__}")


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------

def density(domain: CanonicalDomain, z: complex) -> float:
    """Curvature -1 hyperbolic density of the domain at z."""
    z = complex(z)
    _require_inside(domain, z)
    if isinstance(domain, UnitDisk):
        return 2.0 / (1.0 - abs(z) ** 2)
    if isinstance(domain, RightHalfPlane):
        return 1.0 / z.real
    if isinstance(domain, HorizontalStrip):
        return 1.0 / math.cos(z.imag)
    a = math.pi / (2.0 * math.log(domain.ring.R))
    return a / (abs(z) * math.cos(a * math.log(abs(z))))


def _density_array(domain: CanonicalDomain, z: np.ndarray) -> np.ndarray:
    """Vectorized density; assumes membership was already checked."""
    if isinstance(domain, UnitDisk):
        return 2.0 / (1.0 - np.abs(z) ** 2)
    if isinstance(domain, RightHalfPlane):
        return 1.0 / z.real
    if isinstance(domain, HorizontalStrip):
        return 1.0 / np.cos(z.imag)
    a = math.pi / (2.0 * math.log(domain.ring.R))
    return a / (np.abs(z) * np.cos(a * np.log(np.abs(z))))


def _gap_array(domain: CanonicalDomain, z: np.ndarray) -> np.ndarray:
    if isinstance(domain, UnitDisk):
        return 1.0 - np.abs(z)
    if isinstance(domain, RightHalfPlane):
        return z.real.copy()
    if isinstance(domain, HorizontalStrip):
        return math.pi / 2.0 - np.abs(z.imag)
    R = domain.ring.R
    r = np.abs(z)
    return np.minimum(r - 1.0 / R, R - r)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def _acosh1p(q: float) -> float:
    """acosh(1 + q) for q >= 0, stable for tiny q."""
    if q < 0.0:
        q = max(q, -1e-15)  # guard rounding noise
        q = max(q, 0.0)
    return math.log1p(q + math.sqrt(q * (q + 2.0)))


def _disk_distance(z: complex, w: complex) -> float:
    p = abs(z - w) / abs(1.0 - z.conjugate() * w)
    return 2.0 * math.atanh(p)


def _halfplane_distance(z: complex, w: complex) -> float:
    q = abs(z - w) ** 2 / (2.0 * z.real * w.real)
    return _acosh1p(q)


def _strip_gap_distance(dx: float, y1: float, y2: float) -> float:
    """Strip distance between x1 + i y1 and x2 + i y2 with dx = x1 - x2.

    Pushing forward by exp to the half-plane gives
        cosh d = 1 + (cosh dx - cos(y1 - y2)) / (cos y1 cos y2),
    written below as 2(sinh^2(dx/2) + sin^2((y1-y2)/2)) / (cos y1 cos y2)
    to stay accurate when both differences are small.
    """
    adx = abs(dx)
    scale = math.cos(y1) * math.cos(y2)
    if adx > 60.0:
        # cosh(dx) dominates everything else; relative error below e^{-120}
        return adx + math.log1p(math.exp(-2.0 * adx)) - math.log(scale)
    q = 2.0 * (math.sinh(adx / 2.0) ** 2 + math.sin(abs(y1 - y2) / 2.0) ** 2)
    return _acosh1p(q / scale)


def lift_to_strip(R: float, p: LogPolarPoint) -> complex:
    """Lift a log-polar annulus point to the universal cover {|Im| < pi/2}.

    Returns zeta = (pi / (2 log R)) * (theta + i u); the deck transformation
    group is generated by zeta -> zeta + pi^2 / log R.
    """
    if not R > 1.0:
        raise ValueError(f"need R > 1, got {R}")
    logR = math.log(R)
    if abs(p.u) >= logR:
        raise PointOutsideDomain(f"|u| = {abs(p.u)} >= log R = {logR}")
    a = math.pi / (2.0 * logR)
    return complex(a * p.theta, a * p.u)


def deck_spacing(R: float) -> float:
    return math.pi ** 2 / math.log(R)


def _annulus_distance(R: float, z: complex, w: complex, window: int = 1) -> float:
    pz = LogPolarPoint.from_complex(z)
    pw = LogPolarPoint.from_complex(w)
    lz = lift_to_strip(R, pz)
    lw = lift_to_strip(R, pw)
    T = deck_spacing(R)
    dx = lz.real - lw.real
    # Strip distance is monotone in |dx| at fixed heights, so the integer
    # minimizer is a nearest lattice point of dx / T; the default window of
    # one neighbor on each side of round(dx / T) is already provably enough.
    k0 = round(dx / T)
    best = math.inf
    for k in range(k0 - window, k0 + window + 1):
        best = min(best, _strip_gap_distance(dx - k * T, lz.imag, lw.imag))
    return best


def distance(domain: CanonicalDomain, z: complex, w: complex) -> float:
    """Hyperbolic distance between two points of a canonical domain."""
    z = complex(z)
    w = complex(w)
    _require_inside(domain, z)
    _require_inside(domain, w)
    if isinstance(domain, UnitDisk):
        return _disk_distance(z, w)
    if isinstance(domain, RightHalfPlane):
        return _halfplane_distance(z, w)
    if isinstance(domain, HorizontalStrip):
        return _halfplane_distance(cmath.exp(z), cmath.exp(w))
    return _annulus_distance(domain.ring.R, z, w)


# ---------------------------------------------------------------------------
# closed-form lengths and winding bounds
# ---------------------------------------------------------------------------

def core_geodesic_length(R: float, n: int) -> float:
    """Length of the unit circle traversed n times: 2 pi^2 |n| / Mod A(R)."""
    if n == 0:
        raise InvalidWinding("the core geodesic needs a nonzero winding")
    if not R > 1.0:
        raise ValueError(f"need R > 1, got {R}")
    return 2.0 * math.pi ** 2 * abs(n) / SymmetricAnnulus(R).modulus()


def circle_length(R: float, r: float) -> float:
    """Hyperbolic length of the circle |z| = r inside A(R), traversed once."""
    logR = math.log(R)
    if not (1.0 / R < r < R):
        raise PointOutsideDomain(f"radius {r} outside (1/R, R)")
    return (math.pi ** 2 / logR) / math.cos(math.pi * math.log(r) / (2.0 * logR))


def degree_bound(R: float, S: float) -> float:
    """Upper bound log S / log R on |winding| of holomorphic A(R) -> A(S).

    A value below 1 forces every image curve to be null-homotopic.
    """
    if not (R > 1.0 and S > 1.0):
        raise ValueError("both annulus parameters must exceed 1")
    return math.log(S) / math.log(R)


# ---------------------------------------------------------------------------
# geodesic polylines (the oracle's paths)
# ---------------------------------------------------------------------------

def _disk_geodesic(z: complex, w: complex, n: int) -> np.ndarray:
    # Moebius-transport w to the origin frame of z, walk the radial geodesic
    # at uniform hyperbolic speed, and map back.
    p = (w - z) / (1.0 - z.conjugate() * w)
    d = 2.0 * math.atanh(abs(p))
    if d == 0.0:
        return np.array([z, w])
    direction = p / abs(p)
    s = np.linspace(0.0, d, n + 1)
    radii = np.tanh(s / 2.0)
    eta = radii * direction
    return (eta + z) / (1.0 + z.conjugate() * eta)


def geodesic_points(domain: CanonicalDomain, z: complex, w: complex, n: int) -> np.ndarray:
    """n+1 points along the geodesic from z to w, uniform in arc length."""
    z = complex(z)
    w = complex(w)
    _require_inside(domain, z)
    _require_inside(domain, w)
    if isinstance(domain, UnitDisk):
        return _disk_geodesic(z, w, n)
    if isinstance(domain, RightHalfPlane):
        cz = (z - 1.0) / (z + 1.0)
        cw = (w - 1.0) / (w + 1.0)
        pts = _disk_geodesic(cz, cw, n)
        return (1.0 + pts) / (1.0 - pts)
    if isinstance(domain, HorizontalStrip):
        pts = geodesic_points(RightHalfPlane(), cmath.exp(z), cmath.exp(w), n)
        return np.log(pts)  # image is in {|Im| < pi/2}: principal branch is right
    R = domain.ring.R
    lz = lift_to_strip(R, LogPolarPoint.from_complex(z))
    lw = lift_to_strip(R, LogPolarPoint.from_complex(w))
    T = deck_spacing(R)
    k0 = round((lz.real - lw.real) / T)
    best_k = min(
        range(k0 - 1, k0 + 2),
        key=lambda k: _strip_gap_distance(lz.real - lw.real - k * T, lz.imag, lw.imag),
    )
    pts = geodesic_points(HorizontalStrip(), lz, lw + best_k * T, n)
    b = 2.0 * math.log(R) / math.pi
    return np.exp(b * pts.imag) * np.exp(1j * b * pts.real)


# ---------------------------------------------------------------------------
# path length (quadrature oracle)
# ---------------------------------------------------------------------------

def path_length(path: PolylinePath, tol: float = 1e-10) -> float:
    """Hyperbolic length of a polyline by adaptive Gauss-Legendre quadrature.

    Serves as the independent oracle for the distance routines.  Every
    quadrature node is membership-checked so a segment that exits the domain
    raises PointOutsideDomain instead of integrating garbage.
    """
    domain = path.ambient
    verts = np.asarray(path.vertices, dtype=complex)
    a = verts[:-1]
    b = verts[1:]
    keep = np.abs(b - a) > 0.0
    a, b = a[keep], b[keep]
    if a.size == 0:
        return 0.0

    euclid_total = float(np.abs(b - a).sum())
    total = 0.0
    # interval stack: (start point, end point) pairs, refined where needed;
    # each interval gets a tolerance share proportional to its length, so the
    # accepted errors sum to at most tol over any refinement.
    for _ in range(60):
        seg = b - a
        speed = np.abs(seg)
        z7 = a[:, None] + seg[:, None] * _GL7_X[None, :]
        z15 = a[:, None] + seg[:, None] * _GL15_X[None, :]
        if np.any(_gap_array(domain, z15) <= BOUNDARY_MARGIN) or np.any(
            _gap_array(domain, z7) <= BOUNDARY_MARGIN
        ):
            raise PointOutsideDomain("a polyline segment exits the domain")
        i7 = speed * (_density_array(domain, z7) @ _GL7_W)
        i15 = speed * (_density_array(domain, z15) @ _GL15_W)
        err = np.abs(i15 - i7)
        done = err <= tol * speed / euclid_total
        total += float(i15[done].sum())
        if np.all(done):
            return total
        a, b = a[~done], b[~done]
        mid = 0.5 * (a + b)
        a = np.concatenate([a, mid])
        b = np.concatenate([mid, b])
    raise RuntimeError("quadrature failed to converge; tolerance too tight?")
