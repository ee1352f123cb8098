"""Seeded samplers for pairs, points, and loops used by experiments and tests.

Samplers keep their draws away from degeneracies on purpose: circle pairs
get an angular separation floor so contraction ratios are measurable, ray
and generic pairs get a height separation floor so limits stay away from
zero, and oracle pairs are capped in hyperbolic distance so polyline
quadrature meets its stated tolerance at a fixed vertex count.
"""

from __future__ import annotations

import math

import numpy as np

from .hypgeo import (
    Annulus,
    CanonicalDomain,
    HorizontalStrip,
    RightHalfPlane,
    UnitDisk,
    distance,
)
from .tower import LogPolarPoint

ANGLE_FLOOR = 0.1          # radians between circle-pair arguments
HEIGHT_FLOOR = 0.05        # normalized log-modulus gap for ray/generic pairs
ORACLE_DISTANCE_CAP = 1.8  # hyperbolic separation cap for quadrature oracles


def _angles(rng, count):
    return ANGLE_FLOOR + rng.uniform(0.0, 2.0 * math.pi - 2.0 * ANGLE_FLOOR, count)


def sample_circle_pairs(R: float, count: int, rng) -> list:
    """Pairs on a common circle, arguments separated by at least the floor."""
    logR = math.log(R)
    out = []
    for _ in range(count):
        u = rng.uniform(-0.8, 0.8) * logR
        theta = rng.uniform(0.0, 2.0 * math.pi)
        gap = float(_angles(rng, 1)[0])
        out.append((LogPolarPoint(u, theta), LogPolarPoint(u, theta + gap)))
    return out


def sample_ray_pairs(R: float, count: int, rng) -> list:
    """Pairs on a common ray with clearly distinct moduli."""
    logR = math.log(R)
    out = []
    for _ in range(count):
        theta = rng.uniform(0.0, 2.0 * math.pi)
        nu1 = rng.uniform(-0.8, 0.8 - 2.0 * HEIGHT_FLOOR)
        nu2 = nu1 + HEIGHT_FLOOR + rng.uniform(0.0, 0.8 - nu1 - HEIGHT_FLOOR)
        out.append((LogPolarPoint(nu1 * logR, theta), LogPolarPoint(nu2 * logR, theta)))
    return out


def sample_generic_pairs(R: float, count: int, rng) -> list:
    """Pairs on neither a common circle nor a common ray."""
    logR = math.log(R)
    out = []
    for _ in range(count):
        theta = rng.uniform(0.0, 2.0 * math.pi)
        gap = float(_angles(rng, 1)[0])
        nu1 = rng.uniform(-0.8, 0.8 - 2.0 * HEIGHT_FLOOR)
        nu2 = nu1 + HEIGHT_FLOOR + rng.uniform(0.0, 0.8 - nu1 - HEIGHT_FLOOR)
        out.append(
            (LogPolarPoint(nu1 * logR, theta), LogPolarPoint(nu2 * logR, theta + gap))
        )
    return out


def sample_point(domain: CanonicalDomain, rng) -> complex:
    """A point comfortably inside the domain (quadrature-friendly)."""
    if isinstance(domain, UnitDisk):
        r = 0.85 * math.sqrt(rng.uniform(0.0, 1.0))
        return r * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
    if isinstance(domain, RightHalfPlane):
        return complex(math.exp(rng.uniform(-1.2, 1.2)), rng.uniform(-2.0, 2.0))
    if isinstance(domain, HorizontalStrip):
        return complex(rng.uniform(-2.0, 2.0), 0.85 * rng.uniform(-1.0, 1.0) * math.pi / 2.0)
    if isinstance(domain, Annulus):
        logR = math.log(domain.ring.R)
        u = rng.uniform(-0.85, 0.85) * logR
        return math.exp(u) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
    raise TypeError(f"not a canonical domain: {domain!r}")


def sample_oracle_pair(domain: CanonicalDomain, rng, cap: float = ORACLE_DISTANCE_CAP):
    """A pair at hyperbolic distance at most cap (rejection sampling)."""
    for _ in range(10_000):
        z = complex(sample_point(domain, rng))
        w = complex(sample_point(domain, rng))
        if z != w and distance(domain, z, w) <= cap:
            return z, w
    raise RuntimeError("rejection sampling failed; cap too tight for the domain")


def sample_loop(R: float, rng, n_points: int = 256):
    """A random smooth closed loop inside A(R) (core loops and contractible ones)."""
    logR = math.log(R)
    ts = np.linspace(0.0, 2.0 * math.pi, n_points + 1)
    if rng.uniform() < 0.7:
        # loop around the core: radius wiggled by a short Fourier series
        c0 = rng.uniform(-0.3, 0.3) * logR
        u = np.full_like(ts, c0)
        budget = 0.45 * logR
        for k in range(1, 4):
            a = rng.uniform(-1.0, 1.0) * budget / (3.0 * k)
            b = rng.uniform(-1.0, 1.0) * budget / (3.0 * k)
            u = u + a * np.cos(k * ts) + b * np.sin(k * ts)
        pts = np.exp(u) * np.exp(1j * ts)
    else:
        # contractible circle around an interior point
        u0 = rng.uniform(-0.4, 0.4) * logR
        th0 = rng.uniform(0.0, 2.0 * math.pi)
        center = math.exp(u0) * np.exp(1j * th0)
        rho = rng.uniform(0.05, 0.25) * min(abs(center) - 1.0 / R, R - abs(center))
        pts = center + rho * np.exp(1j * ts)
    pts[-1] = pts[0]
    return pts
