"""Exhaustive generation of face pairings of ``n`` tetrahedra, up to isomorphism.

Every orientable triangulation is isomorphic to one whose tetrahedra are all
positively oriented, so only odd gluing permutations are tried.  The search
glues the lowest free face first and brings in new tetrahedra in index order,
each through a fixed odd map; relabelling the newcomer absorbs every other
choice.  Branches die as soon as a closed edge cycle is reversed onto itself or,
for cusped targets, more than ``n`` edge cycles have closed (an ideal
triangulation with torus links has exactly ``n`` edges).
"""

from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import CeilingExceeded, TriangulationError
from .isosig import iso_signature
from .perm import S4, inverse, sign
from .triangulation import from_table, write_triangulation

log = logging.getLogger(__name__)

DEFAULT_CEILING = 4

ODD = tuple(p for p in S4 if sign(p) < 0)
# odd maps sending face f to face h
ODD_TO = {(f, h): tuple(p for p in ODD if p[f] == h) for f in range(4) for h in range(4)}
# the map used to attach a new tetrahedron through face f (its own face f)
NEW_MAP = {f: ODD_TO[(f, f)][0] for f in range(4)}


@dataclass(frozen=True)
class EnumerationFilter:
    target: str = "cusped"  # 'cusped' or 'closed'
    max_n: int = DEFAULT_CEILING
    require_connected: bool = True

    def accepts(self, T):
        return T.classify() == self.target


_OTHER = {(a, b): tuple(x for x in range(4) if x not in (a, b)) for a in range(4) for b in range(4) if a != b}


def _edge_cycle(table, n, t, a, b):
    """Walk the edge ``ab`` of ``t``: ``(None, False)`` while open, else ``(members, invalid)``."""
    c, d = _OTHER[(a, b)]
    s = (t, a, b, c, d)
    members = [(t, min(a, b), max(a, b))]
    for _ in range(6 * n):
        st, sa, sb, sc, sd = s
        entry = table[st][sc]
        if entry is None:
            return None, False
        g, p = entry
        s = (g, p[sa], p[sb], p[sd], p[sc])
        if s[0] == t and ((s[1] == a and s[2] == b) or (s[1] == b and s[2] == a)):
            return frozenset(members), s[1] != a
        members.append((s[0], min(s[1], s[2]), max(s[1], s[2])))
    return None, False


def _closed_by(table, n, t, f):
    """Number of closed edge cycles through face ``f`` of ``t``; ``None`` if one is reversed."""
    cycles = set()
    for a, b in ((x, y) for x in range(4) for y in range(x + 1, 4) if f not in (x, y)):
        members, invalid = _edge_cycle(table, n, t, a, b)
        if invalid:
            return None
        if members is not None:
            cycles.add(members)
    return len(cycles)


class _Search:
    def __init__(self, n, target):
        self.n = n
        self.target = target
        self.nodes = 0

    def complete_ok(self, closed):
        # torus links force exactly n edges; sphere links force more than n
        if self.target == "cusped":
            return closed == self.n
        return closed > self.n

    def children(self, table, used):
        """Gluing choices at the lowest free face, as ``((t, f), (g, h), perm)``."""
        free = [(t, f) for t in range(used) for f in range(4) if table[t][f] is None]
        if not free:
            return None, []
        t, f = free[0]
        out = []
        for g, h in free[1:]:
            for p in ODD_TO[(f, h)]:
                out.append(((t, f), (g, h), p))
        if used < self.n:
            out.append(((t, f), (used, f), NEW_MAP[f]))
        return (t, f), out

    def step(self, table, used, closed, option, emit):
        (t, f), (g, h), p = option
        table[t][f] = (g, p)
        table[g][h] = (t, inverse(p))
        new = _closed_by(table, self.n, t, f)
        if new is not None and not (self.target == "cusped" and closed + new > self.n):
            self.run(table, max(used, g + 1), closed + new, emit)
        table[t][f] = None
        table[g][h] = None

    def run(self, table, used, closed, emit):
        self.nodes += 1
        face, options = self.children(table, used)
        if face is None:
            if used == self.n and self.complete_ok(closed):
                emit([list(row) for row in table])
            return
        for option in options:
            self.step(table, used, closed, option, emit)


def _empty(n):
    return [[None] * 4 for _ in range(n)]


def symmetry_reduced_search(n, target="cusped", first_choice=None, stats=None):
    """Yield complete gluing tables (lists of rows) from the reduced backtracking search.

    ``first_choice`` restricts the search to one subtree below the root, which
    is how the work is split across processes.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    search = _Search(n, target)
    out = []
    table = _empty(n)
    _, options = search.children(table, 1)
    if first_choice is not None:
        options = [options[first_choice]]
    search.nodes += 1
    for option in options:
        search.step(table, 1, 0, option, out.append)
    if stats is not None:
        stats["nodes"] = stats.get("nodes", 0) + search.nodes
    yield from out


def _n_first_choices(n):
    search = _Search(n, "cusped")
    return len(search.children(_empty(n), 1)[1])


def _collect(n, flt, first_choice=None):
    found = {}
    stats = {}
    for table in symmetry_reduced_search(n, flt.target, first_choice, stats):
        try:
            T = from_table(table)
        except TriangulationError:
            continue
        if flt.accepts(T):
            found.setdefault(iso_signature(T), T)
    return found, stats.get("nodes", 0)


def _collect_job(args):
    n, target, k = args
    found, nodes = _collect(n, EnumerationFilter(target, max_n=n), k)
    return {s: T.table for s, T in found.items()}, nodes


def enumerate_pairings(n, flt=None, *, workers=1, stats=None):
    """All connected orientable triangulations of ``n`` tetrahedra passing ``flt``,
    one per isomorphism class, sorted by signature."""
    flt = flt or EnumerationFilter()
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > flt.max_n:
        raise CeilingExceeded(f"n={n} is above the enumeration ceiling {flt.max_n}")
    found = {}
    nodes = 0
    if workers > 1:
        jobs = [(n, flt.target, k) for k in range(_n_first_choices(n))]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part, cnt in pool.map(_collect_job, jobs):
                nodes += cnt
                for s, table in part.items():
                    found.setdefault(s, from_table(table))
    else:
        found, nodes = _collect(n, flt)
    if stats is not None:
        stats["nodes"] = nodes
    return [found[s] for s in sorted(found)]


def _matchings(items):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in _matchings(rest):
            yield [(a, items[i])] + m


def brute_force_pairings(n, flt=None, *, odd_only=True, stats=None):
    """Unpruned search over every perfect matching of faces and every gluing map.

    Meant as an oracle for tiny ``n``; ``odd_only=False`` also tries the even maps.
    """
    flt = flt or EnumerationFilter()
    faces = [(t, f) for t in range(n) for f in range(4)]
    found = {}
    nodes = 0
    for m in _matchings(faces):
        opts = [[p for p in S4 if p[a[1]] == b[1] and (not odd_only or sign(p) < 0)] for a, b in m]
        for choice in itertools.product(*opts):
            nodes += 1
            table = _empty(n)
            for (a, b), p in zip(m, choice):
                table[a[0]][a[1]] = (b[0], p)
                table[b[0]][b[1]] = (a[0], inverse(p))
            try:
                T = from_table(table)
            except TriangulationError:
                continue
            if flt.accepts(T):
                found.setdefault(iso_signature(T), T)
    if stats is not None:
        stats["nodes"] = nodes
    return [found[s] for s in sorted(found)]


def write_directory(triangulations, out_dir):
    """One file per triangulation, named by its signature; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for T in triangulations:
        path = os.path.join(out_dir, iso_signature(T))
        write_triangulation(T, path)
        paths.append(path)
    return paths
