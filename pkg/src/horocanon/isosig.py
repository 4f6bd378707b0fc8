"""Isomorphism signatures for triangulations.

For every starting tetrahedron and every one of the 24 labellings of it, the
triangulation is relabelled breadth-first and written out as its gluing table;
the lexicographically smallest table is the canonical one.  The signature is
that table in a compact alphabet, so it decodes back into a triangulation.
"""

from __future__ import annotations

from .perm import S4, S4_INDEX, compose, inverse
from .triangulation import from_table

ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


_COMPOSE = tuple(tuple(S4_INDEX[compose(p, q)] for q in S4) for p in S4)
_INVERSE = tuple(S4_INDEX[inverse(p)] for p in S4)


def _int_table(T):
    return [[(g, S4_INDEX[p]) for g, p in row] for row in T.table]


def _canonical_table(table, start, sigma, best=None):
    """BFS relabelling from ``start``; ``sigma`` (an S4 index) maps old labels of ``start`` to new.

    Returns the flat code list, or None as soon as it exceeds ``best``.
    """
    n = len(table)
    new_index = {start: 0}
    relabel = {start: sigma}  # old labels -> new labels
    order = [start]
    code = []
    pos = 0
    i = 0
    while i < len(order):
        t = order[i]
        rt = relabel[t]
        rt_inv = _INVERSE[rt]
        rt_inv_perm = S4[rt_inv]
        row = table[t]
        for nf in range(4):
            g, p = row[rt_inv_perm[nf]]
            if g not in new_index:
                # the new tetrahedron inherits labels so the gluing map is the identity
                new_index[g] = len(order)
                order.append(g)
                relabel[g] = _COMPOSE[rt][_INVERSE[p]]
            pair = (new_index[g], _COMPOSE[relabel[g]][_COMPOSE[p][rt_inv]])
            if best is not None:
                b = best[pos]
                if pair > b:
                    return None
                if pair < b:
                    best = None
            code.append(pair)
            pos += 1
        i += 1
    if len(order) != n:
        raise ValueError("triangulation is disconnected")
    return code


def canonical_code(T):
    table = _int_table(T)
    best = None
    for start in range(T.n):
        for sigma in range(24):
            code = _canonical_table(table, start, sigma, best)
            if code is not None and (best is None or code < best):
                best = code
    return best


def iso_signature(T):
    code = canonical_code(T)
    n = T.n
    width = 1
    while len(ALPHABET) ** width <= max(n - 1, 23):
        width += 1

    def enc(k):
        s = ""
        for _ in range(width):
            s = ALPHABET[k % len(ALPHABET)] + s
            k //= len(ALPHABET)
        return s

    body = "".join(enc(g) + enc(pi) for g, pi in code)
    return f"{n}_{width}_{body}"


def decode_signature(sig):
    """Rebuild the canonically labelled triangulation from its signature."""
    n_str, w_str, body = sig.split("_", 2)
    n, width = int(n_str), int(w_str)

    def dec(s):
        k = 0
        for ch in s:
            k = k * len(ALPHABET) + ALPHABET.index(ch)
        return k

    vals = [dec(body[i:i + width]) for i in range(0, len(body), width)]
    if len(vals) != 8 * n:
        raise ValueError(f"signature {sig!r} has the wrong length")
    table = []
    for t in range(n):
        row = []
        for f in range(4):
            g, pi = vals[8 * t + 2 * f], vals[8 * t + 2 * f + 1]
            row.append((g, S4[pi]))
        table.append(row)
    return from_table(table)


def are_isomorphic(T1, T2):
    if T1.n != T2.n:
        return False
    return iso_signature(T1) == iso_signature(T2)
