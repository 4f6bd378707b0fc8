"""2-3, 3-2 and 1-4 moves.

All three are instances of one operation: remove some tetrahedra, insert new
ones whose vertices are *named* points of the removed region, and reglue.  The
name bookkeeping is returned alongside the new triangulation so that callers
(the flip loop) can carry shapes across the move.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadValence, RepeatedTetrahedron, SelfAdjacentFace, TooSmall
from .perm import compose, inverse
from .triangulation import from_table


@dataclass(frozen=True)
class Retriangulation:
    removed: tuple  # old tetrahedron indices
    old_names: dict  # old tet -> tuple of 4 names, indexed by label
    new_names: tuple  # one 4-tuple of names per new tetrahedron
    index_map: dict  # surviving old tet -> new index
    first_new: int


def _retriangulate(T, removed, old_names, new_names):
    removed_set = set(removed)
    survivors = [t for t in range(T.n) if t not in removed_set]
    index_map = {t: i for i, t in enumerate(survivors)}
    first_new = len(survivors)
    n_new = first_new + len(new_names)
    table = [[None] * 4 for _ in range(n_new)]

    # old face -> (new tet, map old label -> new label), for faces that survive
    old_to_new = {}
    for t in survivors:
        for f in range(4):
            old_to_new[(t, f)] = (index_map[t], (0, 1, 2, 3))
    face_owner = {}
    for t in removed:
        names = old_names[t]
        for f in range(4):
            key = frozenset(names[x] for x in range(4) if x != f)
            face_owner.setdefault(key, []).append((t, f))

    new_faces = {}
    for k, names in enumerate(new_names):
        for f in range(4):
            key = frozenset(names[x] for x in range(4) if x != f)
            new_faces.setdefault(key, []).append((k, f))

    for key, sides in new_faces.items():
        k_abs = [(first_new + k, f) for k, f in sides]
        if len(sides) == 2:
            (k1, f1), (k2, f2) = sides
            n1, n2 = new_names[k1], new_names[k2]
            p = tuple(f2 if x == f1 else n2.index(n1[x]) for x in range(4))
            table[k_abs[0][0]][f1] = (k_abs[1][0], p)
            table[k_abs[1][0]][f2] = (k_abs[0][0], inverse(p))
        elif len(sides) == 1:
            (k, f), = sides
            owners = face_owner.get(key, [])
            if len(owners) != 1:
                raise ValueError(f"face {sorted(map(str, key))} of a new tetrahedron has no unique old face")
            ot, of = owners[0]
            on = old_names[ot]
            m = tuple(f if x == of else new_names[k].index(on[x]) for x in range(4))
            old_to_new[(ot, of)] = (first_new + k, m)
        else:
            raise ValueError("a face name-set is shared by more than two new faces")

    for (ot, of), (nt, m) in old_to_new.items():
        g, p = T.table[ot][of]
        target = old_to_new.get((g, p[of]))
        if target is None:
            raise ValueError(f"old face {(ot, of)} is glued into the removed region's interior")
        ng, m2 = target
        q = compose(m2, compose(p, inverse(m)))
        table[nt][m[of]] = (ng, q)

    info = Retriangulation(tuple(removed), dict(old_names), tuple(new_names), index_map, first_new)
    return from_table(table), info


def flip_2_3(T, face):
    """2-3 move across ``face = (tet, face_index)``; returns ``(T', info, new_edge)``.

    ``new_edge`` is ``(tet, a, b)`` naming the new valence-3 edge in ``T'``.
    """
    t, f = face
    g, p = T.table[t][f]
    if g == t:
        raise SelfAdjacentFace(f"face {face} has tetrahedron {t} on both sides")
    a_names = tuple("a" if x == f else ("u", x) for x in range(4))
    b_names = [None] * 4
    for x in range(4):
        b_names[p[x]] = "b" if x == f else ("u", x)
    us = [x for x in range(4) if x != f]
    new = []
    for u in us:
        names = list(a_names)
        names[u] = "b"
        new.append(tuple(names))
    T2, info = _retriangulate(T, (t, g), {t: a_names, g: tuple(b_names)}, new)
    return T2, info, (info.first_new, f, us[0])


def move_2_3(T, face):
    return flip_2_3(T, face)[0]


def flip_3_2(T, edge_index):
    """3-2 move removing a valence-3 edge class; returns ``(T', info)``."""
    ec = T.edge_classes[edge_index]
    if ec.valence != 3 or not ec.valid:
        raise BadValence(f"edge {edge_index} has valence {ec.valence}, need 3")
    if T.n - 1 < 2:
        raise TooSmall("the result would have fewer than two tetrahedra")
    tets = [s[0] for s in ec.states]
    if len(set(tets)) != 3:
        raise RepeatedTetrahedron(f"edge {edge_index} meets tetrahedra {tets}")
    old_names = {}
    t0, a, b, c, d = ec.states[0]
    names = [None] * 4
    names[a], names[b], names[c], names[d] = "e0", "e1", "x0", "x1"
    old_names[t0] = tuple(names)
    prev = ec.states[0]
    for k, s in enumerate(ec.states[1:], start=1):
        t, a2, b2, c2, d2 = s
        # s was reached from prev through prev's face opposite prev[3]
        _, pa, pb, pc, pd = prev
        g, p = T.table[prev[0]][pc]
        pn = old_names[prev[0]]
        names = [None] * 4
        names[p[pa]], names[p[pb]], names[p[pd]] = pn[pa], pn[pb], pn[pd]
        names[p[pc]] = "x2" if k == 1 else "x0"
        old_names[t] = tuple(names)
        prev = s
    base = list(old_names[t0])
    n0 = list(base)
    n0[base.index("e1")] = "x2"
    n1 = list(base)
    n1[base.index("e0")] = "x2"
    return _retriangulate(T, tuple(tets), old_names, [tuple(n0), tuple(n1)])


def move_3_2(T, edge_index):
    return flip_3_2(T, edge_index)[0]


def flip_1_4(T, tet):
    names = tuple(("v", x) for x in range(4))
    new = []
    for i in range(4):
        nm = list(names)
        nm[i] = "c"
        new.append(tuple(nm))
    return _retriangulate(T, (tet,), {tet: names}, new)


def move_1_4(T, tet):
    return flip_1_4(T, tet)[0]
