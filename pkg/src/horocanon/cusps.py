"""Cusp cross-sections: the triangulated torus at each ideal vertex.

Every corner ``(t, v)`` of a tetrahedron contributes one link triangle whose
vertices are the tetrahedron edges ``vw``.  All work here assumes a
positively oriented triangulation (see :meth:`Triangulation.oriented`), in
which the link triangle at ``v`` lists ``(w, x, y)`` counterclockwise exactly
when ``(v, w, x, y)`` is an even permutation.

A *dart* ``(t, v, f, w)`` is the side of corner ``(t, v)`` lying in face
``f``, directed away from the link vertex ``(t, v, w)``.  Each geometric side
has two equivalent dart spellings (one per adjacent triangle); darts are
stored in the lexicographically smaller one.

Holonomy convention.  For a simplicial loop of ``k`` darts, at each visited
vertex the loop leaves to its left the corners swept counterclockwise from the
outgoing dart round to the reversed incoming dart.  The dilation is
``(-1)**k`` times the product of those corner moduli; the sign accounts for
the straight angle at each vertex and equals 1 for even ``k``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import IncompleteStructure, NotConsistent, OpenCurve
from .geometry import edge_moduli, log_moduli
from .perm import sign

PAIR_OF_EDGE = {}
for _a, _b, _k in ((0, 1, 0), (2, 3, 0), (0, 2, 1), (1, 3, 1), (0, 3, 2), (1, 2, 2)):
    PAIR_OF_EDGE[(_a, _b)] = PAIR_OF_EDGE[(_b, _a)] = _k


def ccw_pair(v, w):
    """The two remaining labels ``(x, y)`` with ``(v, w, x, y)`` even."""
    x, y = (c for c in range(4) if c != v and c != w)
    if sign((v, w, x, y)) < 0:
        x, y = y, x
    return x, y


@dataclass(frozen=True)
class CuspCurve:
    darts: tuple
    tag: str = ""

    def reversed(self, cusp):
        return CuspCurve(tuple(cusp.reverse(d) for d in reversed(self.darts)), self.tag)

    def __len__(self):
        return len(self.darts)


class CuspTriangulation:
    """Combinatorics of one cusp's link torus (independent of shapes)."""

    def __init__(self, T, cusp):
        if any(s != 1 for s in T.signs):
            raise ValueError("cusp combinatorics need a positively oriented triangulation")
        self.T = T
        self.cusp = cusp
        self.corners = tuple(tv for tv, c in sorted(T.vertex_class_of.items()) if c == cusp)
        corner_set = set(self.corners)
        # link vertices: classes of (t, v, w)
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, v in self.corners:
            for f in range(4):
                if f == v:
                    continue
                g, p = T.table[t][f]
                for w in range(4):
                    if w not in (v, f):
                        a, b = find((t, v, w)), find((g, p[v], p[w]))
                        if a != b:
                            parent[max(a, b)] = min(a, b)
        angles = sorted((t, v, w) for t, v in self.corners for w in range(4) if w != v)
        roots = {}
        self.vertex_of = {}
        for ang in angles:
            self.vertex_of[ang] = roots.setdefault(find(ang), len(roots))
        self.n_vertices = len(roots)
        self.angles = tuple(angles)
        assert all((t, v) in corner_set for t, v, _ in angles)

    # darts

    def canon(self, dart):
        t, v, f, w = dart
        g, p = self.T.table[t][f]
        return min(dart, (g, p[v], p[f], p[w]))

    def reverse(self, dart):
        t, v, f, w = dart
        (w2,) = [c for c in range(4) if c not in (v, f, w)]
        return self.canon((t, v, f, w2))

    def tail(self, dart):
        t, v, f, w = dart
        return self.vertex_of[(t, v, w)]

    def head(self, dart):
        return self.tail(self.reverse(dart))

    def first_dart(self, angle):
        t, v, w = angle
        x, y = ccw_pair(v, w)
        return self.canon((t, v, y, w))

    def last_dart(self, angle):
        t, v, w = angle
        x, y = ccw_pair(v, w)
        return self.canon((t, v, x, w))

    def next_angle(self, angle):
        """The next corner counterclockwise around the same link vertex."""
        t, v, w = angle
        x, _ = ccw_pair(v, w)
        g, p = self.T.table[t][x]
        return (g, p[v], p[w])

    def darts(self):
        out = set()
        for t, v in self.corners:
            for f in range(4):
                if f == v:
                    continue
                for w in range(4):
                    if w not in (v, f):
                        out.add(self.canon((t, v, f, w)))
        return sorted(out)

    def edges(self):
        """Undirected link edges, each as its smaller dart."""
        return sorted({min(d, self.reverse(d)) for d in self.darts()})

    @property
    def euler_characteristic(self):
        return self.n_vertices - len(self.edges()) + len(self.corners)

    # loops

    def check_closed(self, curve):
        ds = curve.darts
        if not ds:
            raise OpenCurve("empty curve")
        for d1, d2 in zip(ds, ds[1:] + ds[:1]):
            if self.head(d1) != self.tail(d2):
                raise OpenCurve(f"dart {d1} does not lead into {d2}")

    def sweep(self, out_dart, back_dart):
        """Corners swept counterclockwise from ``out_dart`` to ``back_dart`` (both leave one vertex)."""
        start = [a for a in self.angles if self.first_dart(a) == out_dart]
        if len(start) != 1:
            raise OpenCurve(f"no corner starts at dart {out_dart}")
        ang = start[0]
        out = []
        for _ in range(len(self.angles) + 1):
            out.append(ang)
            if self.last_dart(ang) == back_dart:
                return out
            ang = self.next_angle(ang)
        raise OpenCurve(f"darts {out_dart} and {back_dart} do not share a vertex")

    def left_corners(self, curve):
        """Corners the loop leaves to its left, grouped per visited vertex."""
        self.check_closed(curve)
        ds = curve.darts
        groups = []
        for i, d_out in enumerate(ds):
            d_in = ds[i - 1]
            groups.append(self.sweep(d_out, self.reverse(d_in)))
        return groups

    def vertex_loop(self, vertex):
        """Counterclockwise loop of darts encircling a link vertex."""
        around = [a for a in self.angles if self.vertex_of[a] == vertex]
        ang = around[0]
        darts = []
        for _ in range(len(around)):
            t, v, w = ang
            x, _y = ccw_pair(v, w)
            # opposite side lies in face w, run from x towards y
            darts.append(self.canon((t, v, w, x)))
            ang = self.next_angle(ang)
        return CuspCurve(tuple(darts), "vertex")

    def tree_cotree(self):
        """Spanning tree of the dual graph, primal tree avoiding it, and the leftover edges."""
        edges = self.edges()
        corner_index = {c: i for i, c in enumerate(self.corners)}
        dual_tree = set()
        seen = {self.corners[0]}
        queue = deque([self.corners[0]])
        while queue:
            t, v = queue.popleft()
            for f in range(4):
                if f == v:
                    continue
                g, p = self.T.table[t][f]
                nb = (g, p[v])
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
                    w = next(c for c in range(4) if c not in (v, f))
                    d = self.canon((t, v, f, w))
                    dual_tree.add(min(d, self.reverse(d)))
        assert len(seen) == len(corner_index)
        # primal tree by BFS over link vertices through edges not crossed by the dual tree
        adj = {k: [] for k in range(self.n_vertices)}
        for e in edges:
            if e in dual_tree:
                continue
            adj[self.tail(e)].append(e)
            adj[self.head(e)].append(self.reverse(e))
        parent = {0: None}  # vertex -> dart from parent into vertex
        queue = deque([0])
        primal_tree = set()
        while queue:
            u = queue.popleft()
            for d in sorted(adj[u]):
                h = self.head(d)
                if h not in parent:
                    parent[h] = d
                    primal_tree.add(min(d, self.reverse(d)))
                    queue.append(h)
        leftover = [e for e in edges if e not in dual_tree and e not in primal_tree]
        return dual_tree, primal_tree, parent, leftover

    def _tree_path(self, parent, a, b):
        """Darts along the primal tree from vertex ``a`` to vertex ``b``."""

        def to_root(x):
            path = []
            while parent[x] is not None:
                d = parent[x]
                path.append(d)
                x = self.tail(d)
            return path

        pa, pb = to_root(a), to_root(b)
        # strip the common part near the root
        while pa and pb and pa[-1] == pb[-1]:
            pa.pop()
            pb.pop()
        up = [self.reverse(d) for d in pa]
        down = list(reversed(pb))
        return up + down

    def generators(self):
        """Two simplicial loops generating the torus homology (``lambda``, ``mu``)."""
        _, _, parent, leftover = self.tree_cotree()
        if len(leftover) != 2:
            raise ValueError(f"cusp {self.cusp} is not a torus ({len(leftover)} cotree edges)")
        loops = []
        for e, tag in zip(leftover, ("lambda", "mu")):
            path = self._tree_path(parent, self.head(e), self.tail(e))
            loops.append(CuspCurve(tuple([e] + path), tag))
        return tuple(loops)

    def intersection_number(self, c1, c2):
        """Algebraic intersection of two simplicial loops.

        ``c2`` is pushed off to its left through the corners it leaves there; each
        edge of ``c1`` that the pushed copy crosses counts +1 or -1 by direction.
        """
        uses = {}
        for d in c1.darts:
            uses[d] = uses.get(d, 0) + 1
            r = self.reverse(d)
            uses[r] = uses.get(r, 0) - 1
        total = 0
        for group in self.left_corners(c2):
            for ang in group[:-1]:
                total += uses.get(self.last_dart(ang), 0)
        return total


def cusp_triangulations(T):
    T = T.oriented()
    return [CuspTriangulation(T, k) for k in range(T.n_vertices)]


def corner_modulus(shapes, angle):
    t, v, w = angle
    return edge_moduli(shapes[t])[PAIR_OF_EDGE[(v, w)]]


def corner_log(shapes, angle):
    t, v, w = angle
    return log_moduli(shapes[t])[PAIR_OF_EDGE[(v, w)]]


def left_product(cusp, curve, shapes):
    """Plain product of the moduli of the corners the loop leaves to its left."""
    prod = 1 + 0j
    for group in cusp.left_corners(curve):
        for ang in group:
            prod *= corner_modulus(shapes, ang)
    return prod


def holonomy_dilation(section, curve, shapes=None):
    cusp = getattr(section, "combinatorics", section)
    shapes = shapes if shapes is not None else section.shapes
    return (-1) ** len(curve) * left_product(cusp, curve, shapes)


def log_holonomy(cusp, curve, shapes):
    """``log`` of the dilation with the branch fixed by corner angles (zero turning)."""
    total = -1j * math.pi * len(curve)
    for group in cusp.left_corners(curve):
        for ang in group:
            total += corner_log(shapes, ang)
    return total


def cusp_generators(section):
    cusp = getattr(section, "combinatorics", section)
    return cusp.generators()


@dataclass
class CuspCrossSection:
    """Euclidean realisation of one cusp torus at given shapes.

    ``scale[(t, v)]`` is the diameter of the circumcircle of corner ``(t, v)``,
    so the side lying in face ``f`` has length ``scale * sin(angle at vertex vf)``.
    """

    combinatorics: CuspTriangulation
    shapes: tuple
    scale: dict
    area: float
    mismatch: float = 0.0
    triangles: tuple = field(default=())

    @property
    def cusp(self):
        return self.combinatorics.cusp

    @property
    def euler_characteristic(self):
        return self.combinatorics.euler_characteristic

    def circumradius(self, corner):
        return self.scale[corner] / 2.0

    def side_length(self, t, v, f):
        return self.scale[(t, v)] * math.sin(corner_log(self.shapes, (t, v, f)).imag)

    def corner_moduli(self, corner):
        t, v = corner
        return {w: corner_modulus(self.shapes, (t, v, w)) for w in range(4) if w != v}

    def scaled(self, factor):
        return CuspCrossSection(
            self.combinatorics, self.shapes,
            {c: s * factor for c, s in self.scale.items()},
            self.area * factor * factor, self.mismatch, self.triangles,
        )


def _edge_products_ok(T, shapes, tol):
    for ec in T.edge_classes:
        total = 0j
        for t, a, b, _c, _d in ec.states:
            total += log_moduli(shapes[t])[PAIR_OF_EDGE[(a, b)]]
        if abs(total - 2j * math.pi) > tol:
            return False
    return True


def build_cross_sections(T, shapes, tol=1e-8):
    """Develop each cusp torus by similarities, with one side of length 1 to start."""
    T = T.oriented()
    shapes = tuple(complex(z) for z in shapes)
    if not _edge_products_ok(T, shapes, tol):
        raise NotConsistent("shapes do not satisfy the edge equations")
    out = []
    for cusp in cusp_triangulations(T):
        scale = {cusp.corners[0]: 1.0}
        queue = deque([cusp.corners[0]])
        mismatch = 0.0
        while queue:
            t, v = queue.popleft()
            for f in range(4):
                if f == v:
                    continue
                g, p = T.table[t][f]
                length = scale[(t, v)] * math.sin(corner_log(shapes, (t, v, f)).imag)
                sin_nb = math.sin(corner_log(shapes, (g, p[v], p[f])).imag)
                k = length / sin_nb
                nb = (g, p[v])
                if nb not in scale:
                    scale[nb] = k
                    queue.append(nb)
                else:
                    mismatch = max(mismatch, abs(scale[nb] - k) / max(k, 1e-300))
        area = 0.0
        for t, v in cusp.corners:
            s = [math.sin(corner_log(shapes, (t, v, w)).imag) for w in range(4) if w != v]
            area += scale[(t, v)] ** 2 / 2.0 * s[0] * s[1] * s[2]
        out.append(CuspCrossSection(cusp, shapes, scale, area, mismatch, cusp.corners))
    return out


def normalize_equal_volume(sections, v=0.5, tol=1e-8):
    """Rescale every cusp to volume ``v`` (torus area ``2 v``); return per-corner radii.

    Returns ``(radii, distances, scaled_sections)`` with ``radii[(t, v)]`` the
    circumradius of that corner's triangle and ``distances = -log(radii)``.
    """
    if v <= 0:
        raise ValueError("cusp volume must be positive")
    radii = {}
    scaled = []
    for sec in sections:
        for curve in sec.combinatorics.generators():
            rho = holonomy_dilation(sec, curve)
            if abs(rho - 1) > tol:
                raise IncompleteStructure(f"cusp {sec.cusp}: dilation {rho} along {curve.tag}")
        if sec.mismatch > tol:
            raise IncompleteStructure(f"cusp {sec.cusp}: similarity structure does not close")
        s = sec.scaled(math.sqrt(2.0 * v / sec.area))
        scaled.append(s)
        for corner in sec.combinatorics.corners:
            radii[corner] = s.circumradius(corner)
    distances = {c: -math.log(r) for c, r in radii.items()}
    return radii, distances, scaled


def dart_vectors(section):
    """A complex vector per dart in one developing frame (complete structures only).

    Reversal negates a vector and each corner rotates its first side onto its
    last side by the corner modulus.
    """
    cusp = section.combinatorics
    by_first = {cusp.first_dart(a): a for a in cusp.angles}
    by_last = {cusp.last_dart(a): a for a in cusp.angles}
    t, v = cusp.corners[0]
    f, w = [x for x in range(4) if x != v][:2]
    d0 = cusp.canon((t, v, f, w))
    vec = {d0: complex(section.side_length(t, v, f))}
    queue = deque([d0])
    while queue:
        d = queue.popleft()
        nbrs = [(cusp.reverse(d), -vec[d])]
        if d in by_first:
            a = by_first[d]
            nbrs.append((cusp.last_dart(a), vec[d] * corner_modulus(section.shapes, a)))
        if d in by_last:
            a = by_last[d]
            nbrs.append((cusp.first_dart(a), vec[d] / corner_modulus(section.shapes, a)))
        for e, x in nbrs:
            if e not in vec:
                vec[e] = x
                queue.append(e)
    return vec


def translation_vector(section, curve, vectors=None):
    """Euclidean translation of a loop in the developed torus."""
    vectors = dart_vectors(section) if vectors is None else vectors
    return sum((vectors[d] for d in curve.darts), 0j)


def torus_area_from_generators(section, c1, c2):
    vectors = dart_vectors(section)
    a = translation_vector(section, c1, vectors)
    b = translation_vector(section, c2, vectors)
    return (a.conjugate() * b).imag


def as_array(radii, n):
    out = np.zeros((n, 4))
    for (t, v), r in radii.items():
        out[t, v] = r
    return out
