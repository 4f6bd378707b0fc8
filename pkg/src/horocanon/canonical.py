"""Tilts, face verdicts, the flip loop and canonical signatures.

All functions take a positively oriented triangulation (``T.oriented()``) with
shapes indexed by tetrahedron; :func:`canonize` orients its input itself.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .cells import CellComplex, complex_signature, face_key
from .cusps import PAIR_OF_EDGE, build_cross_sections, normalize_equal_volume
from .errors import (DegenerateFace, DevelopingMismatch, FlatTetrahedron,
                     HorocanonError, IterationCap, MoveError, NotLightCone,
                     Stuck, Undecided)
from .geometry import (det2, dihedral_angles, minkowski_inner, place_fourth,
                       shape_from_points, spinor_to_lightcone, standard_points)
from .gluing import assemble_equations, solve
from .moves import flip_2_3, flip_3_2
from .perm import EDGES

log = logging.getLogger(__name__)

TRANSPARENT_TOL = 1e-9
HULL_TOL = 1e-8
MAX_FLIPS = 200
J = np.diag([-1.0, 1.0, 1.0, 1.0])


# tilts

def tet_angles(z):
    """Dihedral angle of each edge ``(i, j)`` of a tetrahedron with modulus ``z``."""
    ang = dihedral_angles(z)
    return {e: ang[PAIR_OF_EDGE[e]] for e in EDGES}


def tilt_matrix(angles):
    M = np.eye(4)
    for (i, j), th in angles.items():
        M[i, j] = M[j, i] = -math.cos(th)
    return M


@dataclass(frozen=True)
class TiltVector:
    tet: int
    t: tuple


def tilts(tet, angles, radii):
    """Tilts of the four faces: ``M(theta) r``, face ``i`` opposite vertex ``i``."""
    for e, th in angles.items():
        if not 0.0 < th < math.pi:
            raise FlatTetrahedron(f"tetrahedron {tet}: angle {th} on edge {e}")
    t = tilt_matrix(angles) @ np.asarray(radii, dtype=float)
    return TiltVector(tet, tuple(float(x) for x in t))


def equal_volume_radii(T, shapes, v=0.5):
    sections = build_cross_sections(T, shapes)
    radii, _, _ = normalize_equal_volume(sections, v)
    return radii


def all_tilts(T, shapes, radii):
    out = []
    for t in range(T.n):
        out.append(tilts(t, tet_angles(shapes[t]), [radii[(t, i)] for i in range(4)]))
    return out


@dataclass(frozen=True)
class FaceVerdict:
    face: tuple
    tilt_sum: float
    verdict: str


def verdict_of(x, tol=TRANSPARENT_TOL):
    if x < -tol:
        return "convex"
    if x > tol:
        return "concave"
    return "transparent"


def face_verdicts(T, shapes, radii=None, *, v=0.5, tol=TRANSPARENT_TOL):
    """Tilt sum and verdict for every face, in the order of ``T.faces()``."""
    if radii is None:
        radii = equal_volume_radii(T, shapes, v)
    tv = all_tilts(T, shapes, radii)
    out = []
    for t, f in T.faces():
        g, p = T.table[t][f]
        s = tv[t].t[f] + tv[g].t[p[f]]
        out.append(FaceVerdict((t, f), s, verdict_of(s, tol)))
    return out


# light-cone lift and the hull oracle

def _spinor_scales(points, z, radii_t):
    """Spinor magnitudes putting horoballs of circumradius ``radii_t`` at ``points``."""
    ang = tet_angles(z)
    scales = []
    for i in range(4):
        j, k, m = [x for x in range(4) if x != i]
        # side of the corner triangle at i in the face opposite m joins the edges ij and ik
        side = 2.0 * radii_t[i] * math.sin(ang[tuple(sorted((i, m)))])
        djk = abs(det2(points[j], points[k]))
        dij = abs(det2(points[i], points[j]))
        dik = abs(det2(points[i], points[k]))
        scales.append(math.sqrt(2.0 * djk / (side * dij * dik)))
    return scales


def _lift_tet(points, z, radii_t):
    scales = _spinor_scales(points, z, radii_t)
    return np.array([spinor_to_lightcone((s * p[0], s * p[1])) for s, p in zip(scales, points)])


@dataclass
class LightConeLift:
    """One developed light-cone copy of each tetrahedron.

    ``vectors[t]`` is a ``4x4`` array, row ``i`` the light-cone vector of vertex
    ``i``; tetrahedra are placed along a spanning tree of the dual graph.
    """

    triangulation: object
    shapes: tuple
    radii: dict
    points: list
    vectors: list
    mismatch: float = 0.0

    def neighbour(self, face):
        """Light-cone vectors of the tetrahedron across ``face``, in the frame of its near side."""
        t, f = face
        g, p = self.triangulation.table[t][f]
        known = {p[x]: self.points[t][x] for x in range(4) if x != f}
        pts = place_fourth(known, self.shapes[g])
        vecs = _lift_tet(pts, self.shapes[g], [self.radii[(g, i)] for i in range(4)])
        return g, p, vecs

    def scaled(self, lam):
        return LightConeLift(self.triangulation, self.shapes, self.radii, self.points,
                             [lam * v for v in self.vectors], self.mismatch)


def _rel(a, b):
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(a)))))


def lift_to_lightcone(T, shapes, radii=None, *, v=0.5, tol=1e-9):
    if radii is None:
        radii = equal_volume_radii(T, shapes, v)
    shapes = tuple(complex(z) for z in shapes)
    points = [None] * T.n
    vectors = [None] * T.n
    points[0] = standard_points(shapes[0])
    vectors[0] = _lift_tet(points[0], shapes[0], [radii[(0, i)] for i in range(4)])
    lift = LightConeLift(T, shapes, radii, points, vectors)
    queue = deque([0])
    mismatch = 0.0
    while queue:
        t = queue.popleft()
        for f in range(4):
            g, p, vecs = lift.neighbour((t, f))
            for x in range(4):
                if x != f:
                    mismatch = max(mismatch, _rel(vectors[t][x], vecs[p[x]]))
            if points[g] is None:
                known = {p[x]: points[t][x] for x in range(4) if x != f}
                points[g] = place_fourth(known, shapes[g])
                vectors[g] = vecs
                queue.append(g)
    lift.mismatch = mismatch
    if mismatch > tol:
        raise DevelopingMismatch(f"lifted vertices disagree across a face (relative error {mismatch:.3g})")
    return lift


def affine_normal(vertices):
    """``p`` with ``<p, x> = -1`` for every row ``x`` of ``vertices`` (a simplex)."""
    A = np.asarray(vertices, dtype=float) @ np.diag([-1.0] + [1.0] * (len(vertices[0]) - 1))
    if abs(np.linalg.det(A)) <= 1e-300 or np.linalg.cond(A) > 1e14:
        raise DegenerateFace("simplex vertices are affinely dependent")
    return np.linalg.solve(A, -np.ones(len(vertices)))


def outer_normal(face_vertices, opposite):
    """Unit space-like ``m`` orthogonal to the face with ``<m, opposite> < 0``."""
    E = np.asarray(face_vertices, dtype=float)
    dim = E.shape[1]
    G = np.diag([-1.0] + [1.0] * (dim - 1))
    _, s, vt = np.linalg.svd(E @ G)
    if s[-1] < 1e-12 * s[0]:
        raise DegenerateFace("face vertices are linearly dependent")
    m = vt[-1]
    q = float(m @ G @ m)
    if q <= 0:
        raise DegenerateFace("face normal is not space-like")
    m = m / math.sqrt(q)
    if float(m @ G @ np.asarray(opposite, dtype=float)) > 0:
        m = -m
    return m


def minkowski_tilts(vertices):
    """Tilts ``<p, m_i>`` of every face of a simplex with light-cone vertices (any dimension)."""
    V = np.asarray(vertices, dtype=float)
    p = affine_normal(V)
    G = np.diag([-1.0] + [1.0] * (V.shape[1] - 1))
    out = []
    for i in range(len(V)):
        m = outer_normal(np.delete(V, i, axis=0), V[i])
        out.append(float(p @ G @ m))
    return out


def hull_oracle(lift, face, tol=HULL_TOL):
    """Convex/flat/concave verdict at ``face`` straight from the Minkowski geometry.

    The apex of the far tetrahedron is tested against the affine hyperplane of
    the near one: ``<p_1, y> + 1`` is negative exactly when the dihedral angle
    away from the origin is below pi.
    """
    t, f = face
    V1 = np.asarray(lift.vectors[t], dtype=float)
    if np.any(V1[:, 0] <= 0):
        raise DegenerateFace("lifted vertices must lie on the future light-cone")
    for x in V1:
        if abs(minkowski_inner(x, x)) > 1e-9 * float(x @ x):
            raise NotLightCone(f"{x} is not on the light-cone")
    p1 = affine_normal(V1)
    g, p, V2 = lift.neighbour(face)
    apex = V2[p[f]]
    if apex[0] <= 0:
        raise DegenerateFace("far apex is not future-pointing")
    val = minkowski_inner(p1, apex)
    c = val + 1.0
    scale = 1.0 + abs(val)
    if c < -tol * scale:
        return "convex"
    if c > tol * scale:
        return "concave"
    return "flat"


# the flip loop

@dataclass
class CanonicalDecomposition:
    triangulation: object
    shapes: tuple
    verdicts: list
    transparent: frozenset
    cells: list
    signature: str
    flips: list = field(default_factory=list)

    @property
    def n_cells(self):
        return len(self.cells)


def carry_shapes(T, shapes, info, T2):
    """Shapes of ``T2`` after a retriangulation, by developing the removed region."""
    pts = {}
    removed = list(info.removed)
    t0 = removed[0]
    for x, q in enumerate(standard_points(shapes[t0])):
        pts[info.old_names[t0][x]] = q
    placed = {t0}
    while len(placed) < len(removed):
        progress = False
        for t in removed:
            if t in placed:
                continue
            names = info.old_names[t]
            known = {x: pts[names[x]] for x in range(4) if names[x] in pts}
            if len(known) < 3:
                continue
            if len(known) == 3:
                full = place_fourth(known, shapes[t])
                (miss,) = [x for x in range(4) if x not in known]
                pts[names[miss]] = full[miss]
            placed.add(t)
            progress = True
        if not progress:
            raise ValueError("removed region is not face-connected")
    new = [None] * T2.n
    for t, i in info.index_map.items():
        new[i] = shapes[t]
    for k, names in enumerate(info.new_names):
        i = info.first_new + k
        if T2.signs[i] < 0:
            names = (names[0], names[1], names[3], names[2])
        new[i] = complex(shape_from_points([pts[nm] for nm in names]))
    return tuple(new)


def _geometric(zs):
    return all(z.imag > TRANSPARENT_TOL for z in zs)


def _try_flip(T, shapes, face):
    """Best geometric move removing concave ``face``: a 2-3, or a 3-2 on one of its edges."""
    t, f = face
    T2, info, _ = flip_2_3(T, face)
    z2 = carry_shapes(T, shapes, info, T2.oriented())
    if _geometric(z2):
        return T2.oriented(), z2, f"2-3 at face {face}"
    us = [x for x in range(4) if x != f]
    for k, u in enumerate(us):
        if z2[info.first_new + k].imag > TRANSPARENT_TOL:
            continue
        a, b = [x for x in us if x != u]
        e = T.edge_index(t, a, b)
        try:
            T3, info3 = flip_3_2(T, e)
        except MoveError:
            continue
        z3 = carry_shapes(T, shapes, info3, T3.oriented())
        if _geometric(z3):
            return T3.oriented(), z3, f"3-2 at edge {e} of face {face}"
    return None


def decompose(T, shapes, verdicts, flips=()):
    transparent = frozenset(fv.face for fv in verdicts if fv.verdict == "transparent")
    cx = CellComplex(T, transparent)
    return CanonicalDecomposition(T, tuple(shapes), list(verdicts), transparent, cx.cells(),
                                  complex_signature(T, transparent), list(flips))


def canonize(T, shapes=None, *, v=0.5, max_flips=MAX_FLIPS):
    """Flip toward the canonical decomposition, then merge across transparent faces."""
    T = T.oriented()
    if shapes is None:
        shapes = solve(assemble_equations(T)).z
    shapes = tuple(complex(z) for z in shapes)
    flips = []
    for _ in range(max_flips + 1):
        verdicts = face_verdicts(T, shapes, v=v)
        concave = [fv for fv in verdicts if fv.verdict == "concave"]
        if not concave:
            return decompose(T, shapes, verdicts, flips)
        if len(flips) >= max_flips:
            break
        concave.sort(key=lambda fv: (-fv.tilt_sum, fv.face))
        move = None
        for fv in concave:
            if T.is_self_adjacent(fv.face):
                continue
            move = _try_flip(T, shapes, fv.face)
            if move is not None:
                break
        if move is None:
            raise Stuck(f"no concave face admits a geometric move ({len(concave)} concave)")
        T, carried, desc = move
        flips.append(desc)
        log.debug("flip %d: %s", len(flips), desc)
        shapes = solve(assemble_equations(T), carried).z
    raise IterationCap(f"no canonical decomposition after {max_flips} flips")


def decomposition_signature(D):
    return D.signature


def _load(x):
    from .triangulation import read_triangulation, Triangulation

    return x if isinstance(x, Triangulation) else read_triangulation(x)


def manifolds_equal(A, B):
    """Compare canonical decompositions; raises :class:`Undecided` if either pipeline fails."""
    sigs = []
    for x in (A, B):
        try:
            sigs.append(canonize(_load(x)).signature)
        except HorocanonError as exc:
            raise Undecided(f"{type(exc).__name__}: {exc}") from exc
    return sigs[0] == sigs[1]
