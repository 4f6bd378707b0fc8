"""Shared fixtures and independent oracles for the test suite."""

import math
import random
import warnings
from functools import lru_cache

from scipy.integrate import IntegrationWarning, quad

from horocanon.enumeration import EnumerationFilter, brute_force_pairings, enumerate_pairings
from horocanon.errors import HorocanonError
from horocanon.gluing import assemble_equations, solve
from horocanon.moves import flip_2_3, flip_3_2
from horocanon.perm import S4, compose, inverse
from horocanon.triangulation import from_table, parse_triangulation

# the two n=2 cusped triangulations with both edges of valence 6
FIG8_TEXT = "tri 2\n1:3201 1:1230 1:3012 1:2310\n0:3201 0:1230 0:3012 0:2310\n"
SISTER_TEXT = "tri 2\n1:3120 1:1230 1:2103 1:2031\n0:2103 0:1302 0:3012 0:3120\n"
# cusped, with a valence-1 edge
VALENCE1_TEXT = "tri 2\n1:3120 1:1230 0:2031 0:1302\n1:1023 1:1023 0:3012 0:3120\n"

REGULAR = complex(0.5, math.sqrt(3) / 2)

# one line per acceptance criterion, echoed in the pytest summary
ACCEPTANCE_LINES = []


def fig8():
    return parse_triangulation(FIG8_TEXT)


def sister():
    return parse_triangulation(SISTER_TEXT)


def valence1():
    return parse_triangulation(VALENCE1_TEXT)


def quad_lobachevsky(theta):
    """``-int_0^theta log|2 sin t| dt`` by adaptive quadrature (split to tame the log end)."""

    def f(t):
        s = abs(2.0 * math.sin(t))
        return -math.log(s) if s > 0 else 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        a, _ = quad(f, 0.0, theta / 2, limit=200, epsabs=1e-15, epsrel=1e-14)
        b, _ = quad(f, theta / 2, theta, limit=200, epsabs=1e-15, epsrel=1e-14)
    return a + b


def relabel(T, rng):
    """A random isomorphic copy: shuffled tetrahedra and random vertex labels."""
    n = T.n
    perm = list(range(n))
    rng.shuffle(perm)
    sig = [rng.choice(S4) for _ in range(n)]
    table = [[None] * 4 for _ in range(n)]
    for t in range(n):
        for f in range(4):
            g, p = T.table[t][f]
            table[perm[t]][sig[t][f]] = (perm[g], compose(sig[g], compose(p, inverse(sig[t]))))
    return from_table(table)


def move_options(T):
    T = T.oriented()
    opts = [("2-3", f) for f in T.faces() if not T.is_self_adjacent(f)]
    if T.n > 2:
        for e, ec in enumerate(T.edge_classes):
            if ec.valence == 3 and len({s[0] for s in ec.states}) == 3:
                opts.append(("3-2", e))
    return T, opts


def apply_move(T, kind, x):
    return flip_2_3(T, x)[0] if kind == "2-3" else flip_3_2(T, x)[0]


def geometric_walk(T, rng, length):
    """Random 2-3 / 3-2 walk keeping only steps after which the structure stays geometric."""
    for _ in range(length):
        T, opts = move_options(T)
        kind, x = rng.choice(opts)
        T2 = apply_move(T, kind, x)
        try:
            solve(assemble_equations(T2))
        except HorocanonError:
            continue
        T = T2
    return T.oriented()


@lru_cache(maxsize=None)
def cusped(n):
    return tuple(enumerate_pairings(n, EnumerationFilter("cusped")))


@lru_cache(maxsize=None)
def solved(n):
    """``(T, shapes)`` for every geometric candidate with n tetrahedra."""
    out = []
    for T in cusped(n):
        T = T.oriented()
        try:
            out.append((T, solve(assemble_equations(T)).z))
        except HorocanonError:
            pass
    return tuple(out)


@lru_cache(maxsize=None)
def brute(n, target):
    return tuple(brute_force_pairings(n, EnumerationFilter(target), odd_only=n > 1))


def rng(seed=0):
    return random.Random(seed)
