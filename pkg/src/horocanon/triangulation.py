"""Loose and ideal triangulations: gluing tables, validation, edge classes and vertex links.

A tetrahedron has vertices labelled 0..3 and face ``f`` is the face opposite
vertex ``f``.  Face ``f`` of tetrahedron ``t`` is glued to tetrahedron ``g`` by a
full permutation ``p`` of the labels; ``p[f]`` is the face of ``g`` it lands on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import NotConnected, NotInvolution, NotOrientable, ParseError
from .perm import EDGES, compose, inverse, is_perm, sign

Face = tuple  # (tet, face)


@dataclass(frozen=True)
class FaceGluing:
    source: tuple[int, int]
    target: tuple[int, int]
    vertex_map: tuple[int, int, int, int]


@dataclass(frozen=True)
class EdgeClass:
    """One edge of the triangulation, walked around.

    ``states`` holds one ``(tet, a, b, c, d)`` per step: the edge is ``ab`` in
    ``tet`` and the walk leaves ``tet`` through the face opposite ``c``.
    """

    index: int
    states: tuple
    valid: bool = True

    @property
    def members(self):
        return tuple((s[0], (min(s[1], s[2]), max(s[1], s[2]))) for s in self.states)

    @property
    def valence(self):
        return len(self.states)


@dataclass(frozen=True)
class VertexLink:
    vertex_class: int
    corners: tuple  # (tet, vertex) pairs, one link triangle each
    n_vertices: int
    n_edges: int
    orientable: bool

    @property
    def n_triangles(self):
        return len(self.corners)

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_triangles

    @property
    def is_torus(self):
        return self.orientable and self.euler_characteristic == 0

    @property
    def is_sphere(self):
        return self.euler_characteristic == 2


class _UnionFind:
    """Union-find over ``0 .. size-1``."""

    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


@dataclass(frozen=True, eq=True)
class Triangulation:
    """An immutable, validated, orientable and connected triangulation.

    ``table[t][f] == (g, perm)``; ``signs[t]`` is +1/-1 and witnesses the
    orientation (every gluing satisfies ``sign(perm) == -signs[t] * signs[g]``).
    """

    table: tuple
    signs: tuple

    @property
    def n(self):
        return len(self.table)

    def gluing(self, tet, face):
        return self.table[tet][face]

    @property
    def one_tetrahedron(self):
        # the move theorems exclude this case; callers may want to warn
        return self.n == 1

    def faces(self):
        """Each glued pair of faces once, as the lexicographically smaller side."""
        out = []
        for t in range(self.n):
            for f in range(4):
                g, p = self.table[t][f]
                if (t, f) <= (g, p[f]):
                    out.append((t, f))
        return out

    def partner(self, face):
        t, f = face
        g, p = self.table[t][f]
        return (g, p[f])

    def is_self_adjacent(self, face):
        return self.table[face[0]][face[1]][0] == face[0]

    @cached_property
    def edge_classes(self):
        return _edge_classes(self)

    @cached_property
    def edge_of(self):
        """Map ``(tet, edge_pair) -> edge class index``."""
        out = {}
        for ec in self.edge_classes:
            for t, e in ec.members:
                out[(t, e)] = ec.index
        return out

    def edge_index(self, tet, a, b):
        return self.edge_of[(tet, (min(a, b), max(a, b)))]

    @cached_property
    def vertex_class_of(self):
        uf = _UnionFind(4 * self.n)
        for t in range(self.n):
            for f in range(4):
                g, p = self.table[t][f]
                for v in range(4):
                    if v != f:
                        uf.union(4 * t + v, 4 * g + p[v])
        roots = {}
        out = {}
        for t in range(self.n):
            for v in range(4):
                r = uf.find(4 * t + v)
                out[(t, v)] = roots.setdefault(r, len(roots))
        return out

    @property
    def n_vertices(self):
        return len(set(self.vertex_class_of.values()))

    @cached_property
    def vertex_links(self):
        return _vertex_links(self)

    @property
    def edges_valid(self):
        return all(ec.valid for ec in self.edge_classes)

    def classify(self):
        """Return ``'cusped'``, ``'closed'`` or ``'other'``."""
        if not self.edges_valid:
            return "other"
        links = self.vertex_links
        if all(link.is_torus for link in links):
            return "cusped"
        if all(link.is_sphere for link in links):
            return "closed"
        return "other"

    def oriented(self):
        """Relabel negatively signed tetrahedra by swapping vertices 2 and 3."""
        if all(s == 1 for s in self.signs):
            return self
        swap = (0, 1, 3, 2)
        relabel = [swap if s < 0 else (0, 1, 2, 3) for s in self.signs]
        table = []
        for t in range(self.n):
            row = [None] * 4
            for f in range(4):
                g, p = self.table[t][f]
                # new label x of t is old label relabel[t][x]; relabel is an involution
                q = compose(relabel[g], compose(p, relabel[t]))
                row[relabel[t][f]] = (g, q)
            table.append(tuple(row))
        return Triangulation(tuple(table), (1,) * self.n)

    def to_text(self):
        lines = [f"tri {self.n}"]
        for row in self.table:
            lines.append(" ".join(f"{g}:{''.join(map(str, p))}" for g, p in row))
        return "\n".join(lines) + "\n"

    def gluing_list(self):
        return [
            FaceGluing((t, f), (g, p[f]), p)
            for t, row in enumerate(self.table)
            for f, (g, p) in enumerate(row)
        ]

    def __repr__(self):
        return f"Triangulation(n={self.n})"


def build_triangulation(n, gluings):
    """Validate a full list of face gluings and return a :class:`Triangulation`."""
    if n < 1:
        raise NotConnected("a triangulation needs at least one tetrahedron")
    table = [[None] * 4 for _ in range(n)]
    for gl in gluings:
        t, f = gl.source
        g, f2 = gl.target
        p = tuple(gl.vertex_map)
        if not (0 <= t < n and 0 <= g < n and 0 <= f < 4 and 0 <= f2 < 4):
            raise NotInvolution(f"face {gl.source} -> {gl.target}: index out of range")
        if not is_perm(p) or p[f] != f2:
            raise NotInvolution(f"face {gl.source}: vertex map {p} does not send face {f} to {f2}")
        if table[t][f] is not None:
            raise NotInvolution(f"face {(t, f)} appears twice as a source")
        table[t][f] = (g, p)
    return from_table(table)


def from_table(table):
    n = len(table)
    table = [list(row) for row in table]
    for t in range(n):
        for f in range(4):
            if table[t][f] is None:
                raise NotInvolution(f"face {(t, f)} is not glued", (t, f))
            g, p = table[t][f]
            p = tuple(p)
            table[t][f] = (g, p)
            if (g, p[f]) == (t, f):
                raise NotInvolution(f"face {(t, f)} is glued to itself", (t, f))
    for t in range(n):
        for f in range(4):
            g, p = table[t][f]
            back = table[g][p[f]]
            if back is None or back[0] != t or back[1] != inverse(p):
                raise NotInvolution(
                    f"face {(t, f)} -> {(g, p[f])} is not reciprocated by the inverse map", (t, f))

    # 2-colour the dual graph by permutation parity
    signs = [0] * n
    signs[0] = 1
    queue = deque([0])
    while queue:
        t = queue.popleft()
        for f in range(4):
            g, p = table[t][f]
            want = -signs[t] * sign(p)
            if signs[g] == 0:
                signs[g] = want
                queue.append(g)
            elif signs[g] != want:
                raise NotOrientable(f"face {(t, f)} -> tetrahedron {g} reverses the orientation")
    if 0 in signs:
        raise NotConnected(f"tetrahedron {signs.index(0)} is not connected to tetrahedron 0")
    return Triangulation(tuple(tuple(row) for row in table), tuple(signs))


def _next_state(T, state):
    t, a, b, c, d = state
    g, p = T.table[t][c]
    return (g, p[a], p[b], p[d], p[c])


def _edge_classes(T):
    seen = set()
    out = []
    for t in range(T.n):
        for a, b in EDGES:
            if (t, (a, b)) in seen:
                continue
            c, d = (x for x in range(4) if x not in (a, b))
            start = (t, a, b, c, d)
            states = [start]
            members = {(t, (a, b))}
            valid = True
            s = _next_state(T, start)
            while s != start:
                key = (s[0], (min(s[1], s[2]), max(s[1], s[2])))
                if key in members:
                    # the edge is identified with itself in reverse
                    valid = False
                    break
                members.add(key)
                states.append(s)
                s = _next_state(T, s)
            seen |= members
            out.append(EdgeClass(len(out), tuple(states), valid))
    return tuple(out)


def _vertex_links(T):
    classes = T.vertex_class_of
    # link vertices are the ends of tetrahedron edges, identified across faces
    ends = _UnionFind(16 * T.n)
    for t in range(T.n):
        for f in range(4):
            g, p = T.table[t][f]
            for v in range(4):
                if v == f:
                    continue
                for w in range(4):
                    if w != v and w != f:
                        ends.union(16 * t + 4 * v + w, 16 * g + 4 * p[v] + p[w])
    links = []
    for k in range(T.n_vertices):
        corners = tuple(sorted(tv for tv, c in classes.items() if c == k))
        roots = {ends.find(16 * t + 4 * v + w) for t, v in corners for w in range(4) if w != v}
        orientable = True
        for t, v in corners:
            for f in range(4):
                if f == v:
                    continue
                g, p = T.table[t][f]
                if sign(p) != -T.signs[t] * T.signs[g]:
                    orientable = False
        links.append(VertexLink(k, corners, len(roots), 3 * len(corners) // 2, orientable))
    return tuple(links)


def edge_classes(T):
    return list(T.edge_classes)


def vertex_links(T):
    return list(T.vertex_links)


def parse_triangulation(text):
    """Parse the ``tri <n>`` text format; raises :class:`ParseError` with a line number."""
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty input")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "tri" or not head[1].isdigit() or int(head[1]) < 1:
        raise ParseError(1, "expected 'tri <n>'")
    n = int(head[1])
    body = [ln for ln in lines[1:]]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != n:
        raise ParseError(min(len(lines), n + 1) + (1 if len(body) < n else 0),
                         f"expected {n} tetrahedron lines, found {len(body)}")
    table = []
    for t, line in enumerate(body):
        lineno = t + 2
        tokens = line.split()
        if len(tokens) != 4:
            raise ParseError(lineno, f"expected 4 tokens, found {len(tokens)}")
        row = []
        for f, tok in enumerate(tokens):
            g, sep, digits = tok.partition(":")
            if not sep or not g.isdigit() or len(digits) != 4 or not digits.isdigit():
                raise ParseError(lineno, f"malformed token {tok!r}")
            p = tuple(int(ch) for ch in digits)
            if int(g) >= n or not is_perm(p):
                raise ParseError(lineno, f"bad gluing {tok!r}")
            row.append((int(g), p))
        table.append(row)
    try:
        return from_table(table)
    except NotInvolution as exc:
        raise ParseError(exc.face[0] + 2, str(exc)) from exc


def read_triangulation(path):
    with open(path) as fh:
        return parse_triangulation(fh.read())


def write_triangulation(T, path):
    with open(path, "w") as fh:
        fh.write(T.to_text())
