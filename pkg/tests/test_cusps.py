import math

import numpy as np
import pytest

from horocanon.cusps import (CuspCurve, build_cross_sections, cusp_generators, cusp_triangulations,
                             holonomy_dilation, normalize_equal_volume, torus_area_from_generators)
from horocanon.errors import IncompleteStructure, NotConsistent, OpenCurve
from horocanon.fixtures import fixture_horocycle_2d
from horocanon.geometry import edge_moduli
from horocanon.gluing import GluingEquationSystem, assemble_equations, solve

from support import REGULAR, fig8, sister, solved


def sections(T):
    sa = solve(assemble_equations(T))
    return build_cross_sections(T, sa.z)


def subsystem(S, keep):
    rows = [i for i, k in enumerate(keep) if k]
    return GluingEquationSystem(S.triangulation, S.exponents[rows], S.targets[rows],
                                tuple(S.kinds[i] for i in rows), ())


def incomplete_shapes(T, rows_kept):
    """A nearby point of the deformation space satisfying only some rows."""
    S = assemble_equations(T)
    sub = subsystem(S, rows_kept(S))
    start = [z * (1 + 0.05j * (k + 1)) for k, z in enumerate(solve(S).z)]
    return S, solve(sub, start, restarts=0).z


@pytest.mark.parametrize("make", [fig8, sister])
def test_fig8_and_sibling_sections(make):
    secs = sections(make())
    assert len(secs) == 1
    sec = secs[0]
    assert len(sec.triangles) == 8
    assert sec.euler_characteristic == 0
    for corner in sec.triangles:
        mods = sec.corner_moduli(corner)
        assert math.fsum(math.atan2(m.imag, m.real) for m in mods.values()) == pytest.approx(math.pi, abs=1e-12)
        expected = edge_moduli(sec.shapes[corner[0]])
        assert sorted(mods.values(), key=abs) == pytest.approx(sorted(expected, key=abs), abs=1e-12)
    assert sec.mismatch < 1e-12


def test_generators_intersect_once():
    for T, z in solved(3):
        for cusp in cusp_triangulations(T):
            lam, mu = cusp_generators(cusp)
            assert abs(cusp.intersection_number(lam, mu)) == 1
            assert cusp.euler_characteristic == 0


def test_generators_are_deterministic():
    a = cusp_generators(cusp_triangulations(sister())[0])
    b = cusp_generators(cusp_triangulations(sister())[0])
    assert a == b


def test_completeness_at_solutions():
    for T, z in solved(3):
        for sec in build_cross_sections(T, z):
            for curve in cusp_generators(sec):
                assert abs(holonomy_dilation(sec, curve) - 1) < 1e-9


def test_vertex_loops_close_up():
    for T, z in solved(3)[:20]:
        for sec in build_cross_sections(T, z):
            cusp = sec.combinatorics
            for vertex in set(cusp.vertex_of.values()):
                assert abs(holonomy_dilation(sec, cusp.vertex_loop(vertex)) - 1) < 1e-9


def test_reversed_loop_gives_reciprocal():
    S, z = incomplete_shapes(fig8(), lambda S: [k == "edge" for k in S.kinds])
    sec = build_cross_sections(fig8(), z)[0]
    cusp = sec.combinatorics
    for curve in cusp_generators(sec):
        rho = holonomy_dilation(sec, curve)
        assert abs(rho - 1) > 1e-4
        assert holonomy_dilation(sec, curve.reversed(cusp)) == pytest.approx(1 / rho, abs=1e-12)
        there_and_back = CuspCurve(curve.darts + curve.reversed(cusp).darts)
        assert holonomy_dilation(sec, there_and_back) == pytest.approx(1, abs=1e-12)


def test_dilation_is_multiplicative_on_repeats():
    S, z = incomplete_shapes(fig8(), lambda S: [k == "edge" for k in S.kinds])
    sec = build_cross_sections(fig8(), z)[0]
    lam, mu = cusp_generators(sec)
    twice = CuspCurve(lam.darts + lam.darts)
    assert holonomy_dilation(sec, twice) == pytest.approx(holonomy_dilation(sec, lam) ** 2, abs=1e-12)


def test_one_generator_forces_the_other():
    # edge rows and the first cusp row only; the second follows
    for make in (fig8, sister):
        T = make()
        S, z = incomplete_shapes(T, lambda S: [k == "edge" or i == S.n_edges for i, k in enumerate(S.kinds)])
        sec = build_cross_sections(T, z)[0]
        lam, mu = cusp_generators(sec)
        assert abs(holonomy_dilation(sec, lam) - 1) < 1e-9
        assert abs(holonomy_dilation(sec, mu) - 1) < 1e-8


def test_open_curve():
    sec = sections(fig8())[0]
    lam, _ = cusp_generators(sec)
    with pytest.raises(OpenCurve):
        holonomy_dilation(sec, CuspCurve(lam.darts[:-1]))


def test_not_consistent():
    with pytest.raises(NotConsistent):
        build_cross_sections(fig8(), [REGULAR, 0.3 + 0.9j])


def test_incomplete_structure():
    _, z = incomplete_shapes(fig8(), lambda S: [k == "edge" for k in S.kinds])
    secs = build_cross_sections(fig8(), z)
    with pytest.raises(IncompleteStructure):
        normalize_equal_volume(secs)


def test_area_and_translations():
    for T, z in solved(3)[:20]:
        for sec in build_cross_sections(T, z):
            lam, mu = cusp_generators(sec)
            assert abs(torus_area_from_generators(sec, lam, mu)) == pytest.approx(sec.area, rel=1e-9)


def test_equal_volume_radii():
    radii, dist, secs = normalize_equal_volume(sections(fig8()), v=0.5)
    vals = np.array(list(radii.values()))
    assert len(vals) == 8
    assert np.ptp(vals) < 1e-12
    assert secs[0].area == pytest.approx(1.0, abs=1e-12)
    for c in radii:
        assert radii[c] == pytest.approx(math.exp(-dist[c]), rel=1e-12)


def test_doubling_volume_scales_radii():
    for T, z in solved(3)[:10]:
        secs = build_cross_sections(T, z)
        r1, _, _ = normalize_equal_volume(secs, v=0.5)
        r2, _, s2 = normalize_equal_volume(secs, v=1.0)
        for c in r1:
            assert r2[c] / r1[c] == pytest.approx(math.sqrt(2), rel=1e-12)
        for s in s2:
            assert s.area == pytest.approx(2.0, rel=1e-12)


def test_horocycle_2d():
    for h in (1.5, 2.0, 10.0, 123.4):
        r, d = fixture_horocycle_2d(h)
        assert r == pytest.approx(1 / h, rel=1e-15)
        assert d == pytest.approx(math.log(h), rel=1e-15)
        assert r == pytest.approx(math.exp(-d), rel=1e-14)
