"""Permutations of {0, 1, 2, 3} stored as 4-tuples (``p[i]`` is the image of ``i``)."""

from itertools import permutations

S4 = tuple(permutations(range(4)))
S4_INDEX = {p: i for i, p in enumerate(S4)}
IDENTITY = (0, 1, 2, 3)

# the six edges of a tetrahedron, in a fixed order
EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {e: i for i, e in enumerate(EDGES)}
EDGE_INDEX.update({(b, a): i for (a, b), i in list(EDGE_INDEX.items())})


def compose(p, q):
    """Return ``p o q`` (apply ``q`` first)."""
    return tuple(p[q[i]] for i in range(4))


def inverse(p):
    inv = [0] * 4
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def sign(p):
    s = 1
    seen = [False] * 4
    for i in range(4):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def transposition(a, b):
    p = list(IDENTITY)
    p[a], p[b] = b, a
    return tuple(p)


def is_perm(p):
    return len(p) == 4 and sorted(p) == [0, 1, 2, 3]


def other_two(a, b):
    """The two labels of {0,1,2,3} not in {a, b}, ascending."""
    return tuple(x for x in range(4) if x != a and x != b)
