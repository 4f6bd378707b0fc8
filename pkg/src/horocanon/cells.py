"""Cell complexes obtained from a triangulation by erasing transparent faces.

The complex is stored as a 3-dimensional generalized map.  A dart is a flag
(vertex, edge, 2-cell, 3-cell side) and is represented by a tetrahedron flag
``(t, v, w, f)``: vertex ``v`` of tetrahedron ``t``, the edge ``vw``, and the
face of ``t`` opposite ``f`` (which contains ``v`` and ``w``).  Only flags whose
face is not transparent and whose edge is a true edge of the complex are darts;
each flag of the complex has exactly one such representative.

``alpha_i`` swaps the ``i``-dimensional member of the flag.  The canonical code
is the smallest breadth-first numbering of the map over all starting darts, so
two complexes get equal codes exactly when they are combinatorially isomorphic
(orientation-reversing isomorphisms included).
"""

from __future__ import annotations

from collections import deque

from .isosig import ALPHABET


def face_key(T, t, f):
    g, p = T.table[t][f]
    return min((t, f), (g, p[f]))


def _third(a, b, c):
    (x,) = [i for i in range(4) if i not in (a, b, c)]
    return x


class CellComplex:
    def __init__(self, T, transparent):
        self.T = T
        self.transparent = frozenset(face_key(T, t, f) for t, f in transparent)
        self._true_edge = []
        for ec in T.edge_classes:
            solid = sum(1 for t, _a, _b, c, _d in ec.states if not self.is_transparent(t, c))
            # two solid faces around an edge means the edge runs inside a polygon
            self._true_edge.append(solid >= 3)

    def is_transparent(self, t, f):
        return face_key(self.T, t, f) in self.transparent

    def is_true_edge(self, t, a, b):
        return self._true_edge[self.T.edge_index(t, a, b)]

    def _walk(self, t, a, b, s):
        """From face ``s`` of ``t``, turn around edge ``ab`` through tetrahedron ``t``
        until the next solid face; returns ``(t', a', b', face)``."""
        for _ in range(6 * self.T.n + 1):
            o = _third(a, b, s)
            if not self.is_transparent(t, o):
                return t, a, b, o
            g, p = self.T.table[t][o]
            t, a, b, s = g, p[a], p[b], p[o]
        raise ValueError(f"no solid face around edge {(t, a, b)}")

    def darts(self):
        out = []
        for t in range(self.T.n):
            for f in range(4):
                if self.is_transparent(t, f):
                    continue
                for v in range(4):
                    for w in range(4):
                        if len({v, w, f}) == 3 and self.is_true_edge(t, v, w):
                            out.append((t, v, w, f))
        return out

    def alpha(self, i, d):
        t, v, w, f = d
        if i == 0:
            return (t, w, v, f)
        if i == 1:
            y = _third(v, w, f)
            s = f
            for _ in range(6 * self.T.n * 4 + 1):
                if self.is_true_edge(t, v, y):
                    return (t, v, y, s)
                # edge vy is interior to the polygon; continue into the next triangle
                t, v, y, s = self._walk(t, v, y, s)
                y = _third(v, y, s)
            raise ValueError(f"polygon boundary does not close at {d}")
        if i == 2:
            return self._walk(t, v, w, f)
        if i == 3:
            g, p = self.T.table[t][f]
            return (g, p[v], p[w], p[f])
        raise ValueError(i)

    def involutions(self):
        ds = self.darts()
        index = {d: k for k, d in enumerate(ds)}
        return [[index[self.alpha(i, d)] for i in range(4)] for d in ds]

    def cells(self):
        """Tetrahedra grouped into 3-cells (connected across transparent faces)."""
        parent = list(range(self.T.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, f in self.transparent:
            g = self.T.table[t][f][0]
            a, b = find(t), find(g)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups = {}
        for t in range(self.T.n):
            groups.setdefault(find(t), []).append(t)
        return sorted(tuple(v) for v in groups.values())


def _orbits(alpha, gens):
    n = len(alpha)
    seen = [False] * n
    count = 0
    for s in range(n):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        stack = [s]
        while stack:
            d = stack.pop()
            for i in gens:
                e = alpha[d][i]
                if not seen[e]:
                    seen[e] = True
                    stack.append(e)
    return count


def _code_from(alpha, start, best):
    number = {start: 0}
    order = [start]
    code = []
    k = 0
    while k < len(order):
        d = order[k]
        for i in range(4):
            e = alpha[d][i]
            if e not in number:
                number[e] = len(order)
                order.append(e)
            x = number[e]
            if best is not None:
                b = best[len(code)]
                if x > b:
                    return None
                if x < b:
                    best = None
            code.append(x)
        k += 1
    return code


def canonical_gmap_code(alpha):
    best = None
    for s in range(len(alpha)):
        code = _code_from(alpha, s, best)
        if code is not None and (best is None or code < best):
            best = code
    return best


def complex_signature(T, transparent=()):
    """Signature string of the cell complex of ``T`` with ``transparent`` faces erased.

    Format: ``<3-cells>.<2-cells>.<edges>.<vertices>_<width>_<code>``.
    """
    cx = CellComplex(T, transparent)
    alpha = cx.involutions()
    counts = [_orbits(alpha, [g for g in range(4) if g != k]) for k in (3, 2, 1, 0)]
    code = canonical_gmap_code(alpha)
    width = 1
    while len(ALPHABET) ** width <= len(alpha):
        width += 1

    def enc(x):
        s = ""
        for _ in range(width):
            s = ALPHABET[x % len(ALPHABET)] + s
            x //= len(ALPHABET)
        return s

    head = ".".join(str(c) for c in counts)
    return f"{head}_{width}_" + "".join(enc(x) for x in code)
