"""Edge (consistency) and cusp (completeness) equations, and a Gauss-Newton solver.

Equations are kept in logarithmic form.  Row ``r`` reads

    sum_j  A[r, j, 0] log z_j + A[r, j, 1] log z'_j + A[r, j, 2] log z''_j  =  target_r

with ``target = 2 pi i`` for an edge and ``target = pi i k`` for a cusp loop of
``k`` darts (see :mod:`horocanon.cusps` for the holonomy convention).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from .cusps import PAIR_OF_EDGE, cusp_triangulations
from .errors import (AngleSumViolation, DegenerateModulus, DegenerateSolution,
                     NoConvergence, NotCusped)
from .geometry import FLAT_TOL, RESIDUAL_TOL, log_moduli, tet_volume

log = logging.getLogger(__name__)

REGULAR = cmath.exp(1j * math.pi / 3)


@dataclass
class GluingEquationSystem:
    triangulation: object  # positively oriented
    exponents: np.ndarray  # (rows, n, 3) integers
    targets: np.ndarray  # (rows,) complex
    kinds: tuple  # 'edge' or 'cusp' per row
    cusp_curves: tuple  # (cusp index, CuspCurve) per cusp row

    @property
    def n(self):
        return self.exponents.shape[1]

    @property
    def n_edges(self):
        return self.kinds.count("edge")

    @property
    def n_cusps(self):
        return self.kinds.count("cusp") // 2


@dataclass(frozen=True)
class ShapeAssignment:
    z: tuple
    residual_norm: float
    geometric: bool
    iterations: int = 0

    def __iter__(self):
        return iter(self.z)

    def __len__(self):
        return len(self.z)

    def __getitem__(self, i):
        return self.z[i]


def assemble_equations(T):
    """Build the edge rows and two cusp rows per torus cusp of ``T``."""
    if T.classify() != "cusped":
        raise NotCusped("every vertex link must be a torus and every edge valid")
    T = T.oriented()
    n = T.n
    rows, targets, kinds, curves = [], [], [], []
    for ec in T.edge_classes:
        row = np.zeros((n, 3), dtype=int)
        for t, a, b, _c, _d in ec.states:
            row[t, PAIR_OF_EDGE[(a, b)]] += 1
        rows.append(row)
        targets.append(2j * math.pi)
        kinds.append("edge")
    for cusp in cusp_triangulations(T):
        for curve in cusp.generators():
            row = np.zeros((n, 3), dtype=int)
            for group in cusp.left_corners(curve):
                for t, v, w in group:
                    row[t, PAIR_OF_EDGE[(v, w)]] += 1
            rows.append(row)
            targets.append(1j * math.pi * len(curve))
            kinds.append("cusp")
            curves.append((cusp.cusp, curve))
    return GluingEquationSystem(T, np.array(rows), np.array(targets), tuple(kinds), tuple(curves))


def _logs(z):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0) or np.any(z == 1):
        raise DegenerateModulus("a shape equals 0 or 1")
    lz = np.log(z)
    l1 = np.log(1 - z)
    return np.stack([lz, -l1, l1 - lz + 1j * math.pi], axis=1)


def residual(system, shapes):
    """Per-row defect ``sum(exponents * logs) - target``."""
    L = _logs(list(shapes))
    return np.einsum("rjk,jk->r", system.exponents, L) - system.targets


def jacobian(system, shapes):
    """Derivative of :func:`residual` with respect to ``w_j = log z_j``."""
    z = np.asarray(list(shapes), dtype=complex)
    d = np.stack([np.ones_like(z), z / (1 - z), -1 / (1 - z)], axis=1)
    return np.einsum("rjk,jk->rj", system.exponents, d)


def _max_norm(r):
    return float(np.max(np.abs(r))) if len(r) else 0.0


def _newton(system, z0, max_iter):
    w = np.log(np.asarray(z0, dtype=complex))
    z = np.exp(w)
    r = residual(system, z)
    best = (_max_norm(r), z.copy(), 0)
    it = 0
    while it < max_iter:
        res = _max_norm(r)
        if res < 1e-14:
            break
        J = jacobian(system, z)
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        if not np.all(np.isfinite(step)):
            break
        alpha = 1.0
        accepted = False
        for _ in range(40):
            w_new = w + alpha * step
            # stay in the open upper half plane, where the principal branch is valid
            if np.all(w_new.imag > 0) and np.all(w_new.imag < math.pi):
                z_new = np.exp(w_new)
                if np.all(z_new.imag > 0) and not np.any(z_new == 1):
                    r_new = residual(system, z_new)
                    if _max_norm(r_new) < res or _max_norm(r_new) < 1e-13:
                        accepted = True
                        break
            alpha /= 2
        it += 1
        if not accepted:
            break
        w, z, r = w_new, z_new, r_new
        if _max_norm(r) < best[0]:
            best = (_max_norm(r), z.copy(), it)
        if np.linalg.norm(alpha * step) < 1e-16 * max(1.0, np.linalg.norm(w)):
            break
    return z, _max_norm(r), it


def _degenerate(z):
    angles = np.concatenate([_logs(z).imag.ravel()])
    return float(np.min(np.minimum(angles, math.pi - angles)))


def solve(system, initial=None, *, max_iter=100, restarts=5, seed=0, tol=RESIDUAL_TOL):
    """Solve the gluing equations; returns a geometric :class:`ShapeAssignment`.

    Starts from ``initial`` (default: every shape regular), then from up to
    ``restarts`` random points of the box Re in [-1, 2], Im in (0, 2].
    """
    n = system.n
    if initial is None:
        starts = [np.full(n, REGULAR)]
    else:
        starts = [np.asarray(list(initial), dtype=complex)]
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        starts.append(rng.uniform(-1, 2, n) + 1j * rng.uniform(1e-3, 2, n))
    failures = []
    for k, z0 in enumerate(starts):
        z, res, it = _newton(system, z0, max_iter)
        if res < tol:
            geometric = bool(np.all(z.imag > FLAT_TOL))
            sa = ShapeAssignment(tuple(complex(x) for x in z), res, geometric, it)
            if geometric:
                if k:
                    log.debug("converged from restart %d", k)
                return sa
            failures.append(("degenerate", sa))
        else:
            failures.append(("stalled", ShapeAssignment(tuple(complex(x) for x in z), res, False, it)))
    # a stall against the real axis means the only nearby "solution" is flat
    degenerate = [sa for kind, sa in failures if kind == "degenerate"]
    degenerate += [sa for kind, sa in failures if kind == "stalled" and _degenerate(sa.z) < 1e-6]
    if degenerate:
        raise DegenerateSolution("solutions found are flat or degenerate", degenerate[0])
    best = min((sa for _, sa in failures), key=lambda sa: sa.residual_norm)
    raise NoConvergence(f"no solution found (best residual {best.residual_norm:.3g})", best)


def total_volume(T, shapes):
    z = [complex(x) for x in shapes]
    if any(x.imag < 0 for x in z):
        raise DegenerateSolution("negatively oriented tetrahedron")
    return math.fsum(tet_volume(x) for x in z)


def angle_sums(system, shapes):
    L = _logs(list(shapes))
    A = system.exponents[[i for i, k in enumerate(system.kinds) if k == "edge"]]
    return np.einsum("rjk,jk->r", A, L.imag)


def edge_products(system, shapes):
    L = _logs(list(shapes))
    A = system.exponents[[i for i, k in enumerate(system.kinds) if k == "edge"]]
    return np.exp(np.einsum("rjk,jk->r", A, L.real + 1j * np.mod(L.imag, 2 * math.pi)))


def angle_sum_check(system, shapes, tol=1e-8):
    """Check each edge's angle sum is 2 pi, not another multiple; returns the sums."""
    sums = angle_sums(system, shapes)
    for e, s in enumerate(sums):
        if abs(s - 2 * math.pi) > tol:
            raise AngleSumViolation(e, float(s))
    return sums
