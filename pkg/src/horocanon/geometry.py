"""Hyperbolic primitives: ideal tetrahedron moduli, the Lobachevsky function,
horoball formulas and Minkowski-space arithmetic."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import zeta

from .errors import DegenerateModulus, NonPositiveInput, NotLightCone

RESIDUAL_TOL = 1e-10
CLASSIFY_TOL = 1e-12
FLAT_TOL = 1e-9

MINKOWSKI = np.diag([-1.0, 1.0, 1.0, 1.0])


@dataclass(frozen=True)
class Modulus:
    z: complex

    @property
    def flat(self):
        return abs(self.z.imag) <= FLAT_TOL

    @property
    def geometric(self):
        return self.z.imag > FLAT_TOL


def edge_moduli(z):
    """Return ``(z, 1/(1-z), 1-1/z)``, the moduli along the three opposite-edge pairs."""
    z = complex(getattr(z, "z", z))
    if z == 0 or z == 1:
        raise DegenerateModulus(f"modulus {z} is degenerate")
    return z, 1 / (1 - z), 1 - 1 / z


def edge_moduli_array(z):
    """Vectorised :func:`edge_moduli` over an array of moduli."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0) or np.any(z == 1):
        raise DegenerateModulus("an entry equals 0 or 1")
    return z, 1 / (1 - z), 1 - 1 / z


def log_moduli(z):
    """Principal logarithms of ``(z, z', z'')``, valid on the open upper half-plane.

    The three imaginary parts are the dihedral angles and sum to pi.
    """
    z = complex(z)
    if z == 0 or z == 1:
        raise DegenerateModulus(f"modulus {z} is degenerate")
    lz = cmath.log(z)
    l1 = cmath.log(1 - z)
    return lz, -l1, l1 - lz + 1j * math.pi


def dihedral_angles(z):
    return tuple(w.imag for w in log_moduli(z))


# Lobachevsky function

_N_TERMS = 40


@lru_cache(maxsize=None)
def _series_coefficients():
    # zeta(2n) / (n (2n+1)), weights of (theta/pi)^(2n)
    return tuple(float(zeta(2 * n)) / (n * (2 * n + 1)) for n in range(1, _N_TERMS + 1))


def lobachevsky(theta):
    """Lobachevsky function, ``-int_0^theta log|2 sin t| dt``.

    Reduced to ``[-pi/2, pi/2]`` by oddness and pi-periodicity, then summed as
    ``theta (1 - log|2 theta| + sum zeta(2n)/(n(2n+1)) (theta/pi)^(2n))``,
    whose terms shrink at least like ``4^-n`` there.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    x = math.remainder(theta, math.pi)
    if x == 0.0:
        return 0.0
    u = (x / math.pi) ** 2
    acc = 0.0
    power = 1.0
    for c in _series_coefficients():
        power *= u
        term = c * power
        acc += term
        if term < 1e-18:
            break
    return x * (1.0 - math.log(abs(2.0 * x)) + acc)


def tet_volume(z):
    """Volume of the ideal tetrahedron with modulus ``z`` (zero when flat)."""
    z = complex(getattr(z, "z", z))
    if z == 0 or z == 1:
        raise DegenerateModulus(f"modulus {z} is degenerate")
    if z.imag < 0:
        raise DegenerateModulus(f"modulus {z} is negatively oriented")
    if z.imag == 0:
        return 0.0
    return sum(lobachevsky(a) for a in dihedral_angles(z))


# cusp formulas

def cusp_volume(area, height):
    if area <= 0 or height <= 0:
        raise NonPositiveInput(f"area={area}, height={height}")
    return area / (2.0 * height * height)


def equidistant_height(h1, h2):
    """Height where the surface equidistant from horoballs at heights h1, h2 meets the axis."""
    if h1 <= 0 or h2 <= 0:
        raise NonPositiveInput(f"h1={h1}, h2={h2}")
    return math.sqrt(h1 * h2)


# Minkowski space R^{1,3} (also used in R^{1,2} by the fixtures)

def minkowski_inner(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(-x[0] * y[0] + np.dot(x[1:], y[1:]))


def classify_vector(x, tol=CLASSIFY_TOL):
    """``'hyperboloid'``, ``'lightcone'``, ``'spacelike'`` or ``'other'``."""
    x = np.asarray(x, dtype=float)
    q = minkowski_inner(x, x)
    scale = max(1.0, float(np.dot(x, x)))
    if x[0] > 0 and abs(q + 1) <= tol * scale:
        return "hyperboloid"
    if x[0] > 0 and abs(q) <= tol * scale:
        return "lightcone"
    if q > 0:
        return "spacelike"
    return "other"


@dataclass(frozen=True)
class Horoball:
    """``B_y = {x on the hyperboloid : <x, y> >= -1}`` for a light-cone vector ``y``."""

    y: tuple

    def contains(self, x):
        return minkowski_inner(x, self.y) >= -1.0

    @property
    def center(self):
        y = np.asarray(self.y, dtype=float)
        return tuple(y / y[0])


def horoball(y, tol=1e-12):
    if classify_vector(y, tol) != "lightcone":
        raise NotLightCone(f"{tuple(y)} is not on the future light-cone")
    return Horoball(tuple(float(c) for c in y))


def horoball_shrink(y, lam):
    """Horoball at ``lam * y``; for ``lam > 1`` it lies inside ``B_y``."""
    if lam <= 0:
        raise NonPositiveInput(f"lambda={lam}")
    horoball(y)
    return Horoball(tuple(lam * float(c) for c in y))


def hyperboloid_point(v):
    """Point of the hyperboloid over a space direction ``v`` (``x0 = sqrt(1 + |v|^2)``)."""
    v = np.asarray(v, dtype=float)
    return np.concatenate([[math.sqrt(1.0 + float(v @ v))], v])


# ideal points, spinors and light-cone vectors

def spinor_to_lightcone(v):
    """Light-cone vector of the rank-one Hermitian matrix ``v v*``.

    The ideal point is ``v[0]/v[1]`` on the Riemann sphere and the scale of
    ``v`` fixes the horoball: with ``v = (s, 0)`` the horoball about infinity
    is the region above height ``s**2 / 2`` in the upper half-space.
    """
    a, b = complex(v[0]), complex(v[1])
    ab = a * b.conjugate()
    return np.array([
        (abs(a) ** 2 + abs(b) ** 2) / 2.0,
        ab.real,
        ab.imag,
        (abs(a) ** 2 - abs(b) ** 2) / 2.0,
    ])


def det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def cross_ratio(p0, p1, p2, p3):
    """Image of ``p3`` under the Moebius map sending ``p0, p1, p2`` to ``inf, 0, 1``.

    Points are homogeneous pairs ``(x, y)`` standing for ``x / y``.
    """
    return det2(p3, p1) * det2(p2, p0) / (det2(p3, p0) * det2(p2, p1))


def shape_from_points(points, sign=1):
    """Modulus along edge 01 of a tetrahedron whose ideal vertices sit at ``points``."""
    z = cross_ratio(*points)
    return z if sign > 0 else 1 / z


def standard_points(z, sign=1):
    """Homogeneous positions ``inf, 0, 1, z`` realising modulus ``z`` on edge 01."""
    inf, zero, one = (1 + 0j, 0j), (0j, 1 + 0j), (1 + 0j, 1 + 0j)
    if sign > 0:
        return [inf, zero, one, (complex(z), 1 + 0j)]
    return [inf, zero, (complex(z), 1 + 0j), one]


def moebius_from_three(src, dst):
    """2x2 complex matrix sending the three homogeneous points ``src`` to ``dst``."""

    def to_standard(p):
        # columns chosen so that p0 -> inf, p1 -> 0, p2 -> 1
        a, b, c = (np.array(x, dtype=complex) for x in p)
        m = np.array([[b[1], -b[0]], [a[1], -a[0]]], dtype=complex)
        # scale rows so that c goes to 1
        mc = m @ c
        return np.diag([mc[1], mc[0]]) @ m

    ms = to_standard(src)
    md = to_standard(dst)
    return np.linalg.solve(md, ms)


def place_fourth(known, z, sign=1):
    """Complete a tetrahedron with modulus ``z``: ``known`` maps three labels to points.

    Returns the list of four homogeneous points indexed by label.
    """
    std = standard_points(z, sign)
    labels = sorted(known)
    (missing,) = [x for x in range(4) if x not in known]
    m = moebius_from_three([std[x] for x in labels], [known[x] for x in labels])
    out = [None] * 4
    for x in labels:
        out[x] = tuple(np.asarray(known[x], dtype=complex))
    p = m @ np.array(std[missing], dtype=complex)
    out[missing] = (complex(p[0]), complex(p[1]))
    return out
