"""Small worked computations in one and two dimensions, kept as executable ground truth."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentVolumes, NonPositiveInput
from .geometry import cusp_volume, equidistant_height, minkowski_inner


@dataclass(frozen=True)
class TiltFixture:
    s1: float
    s2: float
    p1: tuple
    p2: tuple
    m1: tuple
    m2: tuple
    tilt_sum: float


def fixture_tilt_1d(s1, s2, *, detail=False):
    """Tilt sum at the edge ``F`` with vertices ``(1, +-1, 0)`` in R^{1,2}.

    The two triangles have apexes ``(s1, 0, s1)`` and ``(s2, 0, -s2)``; their
    normals and the outer normals of ``F`` are written down in closed form.
    """
    if s1 <= 0 or s2 <= 0:
        raise NonPositiveInput(f"s1={s1}, s2={s2}")
    p1 = np.array([1.0, 0.0, 1.0 - 1.0 / s1])
    p2 = np.array([1.0, 0.0, 1.0 / s2 - 1.0])
    m1 = np.array([0.0, 0.0, -1.0])
    m2 = np.array([0.0, 0.0, 1.0])
    total = minkowski_inner(p1, m1) + minkowski_inner(p2, m2)
    if not detail:
        return total
    return TiltFixture(s1, s2, tuple(p1), tuple(p2), tuple(m1), tuple(m2), total)


def tilt_1d_vertices(s1, s2):
    """Vertex lists ``(Delta_1, Delta_2)`` of the configuration above; the edge comes first."""
    F = [(1.0, 1.0, 0.0), (1.0, -1.0, 0.0)]
    return F + [(s1, 0.0, s1)], F + [(s2, 0.0, -s2)]


def fixture_horocycle_2d(h):
    """Triangle ``(0, 2, inf)`` in the upper half-plane cut by the horocycle at height ``h``.

    The cut is a segment of length ``2/h``, so ``r = 1/h``; the top of the
    opposite edge is ``1 + i``, at distance ``d = log h`` below the horocycle.
    """
    if h <= 0:
        raise NonPositiveInput(f"h={h}")
    r = (2.0 / h) / 2.0
    d = math.log(h)
    # rounding in d = log h reaches exp(-d) multiplied by |d|
    if not math.isclose(r, math.exp(-d), rel_tol=(4 + 2 * abs(d)) * np.finfo(float).eps):
        raise AssertionError(f"r={r} but exp(-d)={math.exp(-d)}")
    return r, d


@dataclass(frozen=True)
class ShrinkFixture:
    h: float  # sqrt(h1 h2), where the equidistant surface meets the axis
    v: float
    ratio: float  # a1 / a2

    @property
    def predicted(self):
        # v = a1/(2 h1^2) = a2 h2^2/2 gives (h1 h2)^2 = a1/a2
        return self.ratio ** 0.25

    @property
    def printed_identity_holds(self):
        """Whether ``sqrt(h1 h2) == a1 / a2`` literally; true only when ``a1 == a2``."""
        return math.isclose(self.h, self.ratio, rel_tol=1e-12)


def fixture_shrink(h1, h2, a1, a2, *, rel_tol=1e-12):
    """Equidistant height between two cusps of equal volume.

    With ``v = a1 / (2 h1^2) = a2 h2^2 / 2`` the height ``h = sqrt(h1 h2)``
    depends on ``a1 / a2`` alone, namely ``h = (a1 / a2) ** (1/4)``, so it does
    not move when ``v`` changes.  Raises :class:`InconsistentVolumes` when the
    two volumes differ.
    """
    for x in (h1, h2, a1, a2):
        if x <= 0:
            raise NonPositiveInput(f"h1={h1}, h2={h2}, a1={a1}, a2={a2}")
    v1 = cusp_volume(a1, h1)
    v2 = a2 * h2 * h2 / 2.0
    if not math.isclose(v1, v2, rel_tol=rel_tol):
        raise InconsistentVolumes(f"{v1} != {v2}")
    h = equidistant_height(h1, h2)
    out = ShrinkFixture(h, v1, a1 / a2)
    if not math.isclose(h, out.predicted, rel_tol=1e-12):
        raise AssertionError(f"h={h} but (a1/a2)^(1/4)={out.predicted}")
    return out
