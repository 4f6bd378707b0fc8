import math

import numpy as np
import pytest

from horocanon.canonical import (FaceVerdict, canonize, carry_shapes, decompose, decomposition_signature,
                                 equal_volume_radii, face_verdicts, hull_oracle, lift_to_lightcone,
                                 manifolds_equal, minkowski_tilts, tet_angles, tilt_matrix, tilts)
from horocanon.cells import CellComplex, complex_signature
from horocanon.errors import DegenerateFace, FlatTetrahedron, Undecided
from horocanon.fixtures import tilt_1d_vertices
from horocanon.geometry import classify_vector
from horocanon.gluing import assemble_equations, solve
from horocanon.moves import flip_2_3

from support import fig8, geometric_walk, relabel, rng, sister, solved, valence1

REGULAR_ANGLES = {e: math.pi / 3 for e in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]}


def test_regular_tilts():
    for r in (0.1, 0.31, 2.0):
        t = tilts(0, REGULAR_ANGLES, [r] * 4).t
        assert np.allclose(t, -r / 2, atol=1e-15)


def test_tilts_are_linear_and_symmetric():
    g = np.random.default_rng(3)
    for _ in range(20):
        z = complex(g.uniform(-1, 2), g.uniform(0.1, 2))
        ang = tet_angles(z)
        M = tilt_matrix(ang)
        assert np.allclose(M, M.T)
        r1, r2 = g.uniform(0.1, 1, 4), g.uniform(0.1, 1, 4)
        lhs = np.array(tilts(0, ang, r1 + r2).t)
        assert np.allclose(lhs, np.array(tilts(0, ang, r1).t) + np.array(tilts(0, ang, r2).t), atol=1e-14)
        assert np.allclose(tilts(0, ang, np.zeros(4)).t, 0)


def test_flat_tetrahedron():
    ang = dict(REGULAR_ANGLES)
    ang[(0, 1)] = math.pi
    with pytest.raises(FlatTetrahedron):
        tilts(0, ang, [1, 1, 1, 1])
    ang[(0, 1)] = 0.0
    with pytest.raises(FlatTetrahedron):
        tilts(0, ang, [1, 1, 1, 1])


@pytest.mark.parametrize("s1, s2", [(1, 1), (2, 2), (0.5, 3), (1.7, 0.4)])
def test_one_dimension_lower(s1, s2):
    d1, d2 = tilt_1d_vertices(s1, s2)
    # the shared edge is opposite the apex, index 2
    total = minkowski_tilts(d1)[2] + minkowski_tilts(d2)[2]
    assert total == pytest.approx(1 / s1 + 1 / s2 - 2, abs=1e-12)


@pytest.mark.parametrize("make", [fig8, sister])
def test_fixture_faces_are_convex(make):
    T = make()
    z = solve(assemble_equations(T)).z
    radii = equal_volume_radii(T, z)
    r = next(iter(radii.values()))
    vs = face_verdicts(T, z)
    assert len(vs) == 4
    for fv in vs:
        assert fv.verdict == "convex"
        assert fv.tilt_sum == pytest.approx(-r, abs=1e-12)


def test_minkowski_tilts_match_matrix_formula():
    for T, z in solved(3)[:20]:
        lift = lift_to_lightcone(T, z)
        for t in range(T.n):
            r = [lift.radii[(t, i)] for i in range(4)]
            assert np.allclose(minkowski_tilts(lift.vectors[t]), tilts(t, tet_angles(z[t]), r).t, atol=1e-10)


def test_lift_lies_on_light_cone_and_agrees_on_faces():
    for T, z in solved(3)[:20]:
        lift = lift_to_lightcone(T, z)
        assert lift.mismatch < 1e-9
        for V in lift.vectors:
            for y in V:
                assert classify_vector(y, 1e-10) == "lightcone"
        for t, f in T.faces():
            g, p, V2 = lift.neighbour((t, f))
            for x in range(4):
                if x != f:
                    assert np.allclose(lift.vectors[t][x], V2[p[x]], rtol=1e-9, atol=1e-12)


def test_lift_scales_with_cusp_volume():
    T = sister()
    z = solve(assemble_equations(T)).z
    base = lift_to_lightcone(T, z, v=0.5)
    bigger = lift_to_lightcone(T, z, v=0.5 * 4)
    # radii double, so light-cone vectors halve and the horoballs shrink by 2
    for a, b in zip(base.scaled(0.5).vectors, bigger.vectors):
        assert np.allclose(a, b, rtol=1e-12)


def test_hull_oracle_agrees_with_tilts():
    for T, z in solved(3):
        lift = lift_to_lightcone(T, z)
        for fv in face_verdicts(T, z):
            hull = hull_oracle(lift, fv.face)
            assert {"convex": "convex", "flat": "transparent", "concave": "concave"}[hull] == fv.verdict


def test_negated_lift_is_rejected():
    T = fig8()
    lift = lift_to_lightcone(T, solve(assemble_equations(T)).z)
    with pytest.raises(DegenerateFace):
        hull_oracle(lift.scaled(-1.0), (0, 0))


def test_fixture_is_already_canonical():
    D = canonize(fig8())
    assert D.flips == []
    assert D.n_cells == 2
    assert not D.transparent
    assert decomposition_signature(D) == D.signature


def test_canonical_signature_is_relabel_invariant():
    r = rng(21)
    sig = canonize(sister()).signature
    for _ in range(5):
        assert canonize(relabel(sister(), r)).signature == sig


def test_after_2_3_canonize_recovers_the_fixture():
    ref = canonize(fig8()).signature
    for face in fig8().faces():
        T2 = flip_2_3(fig8(), face)[0]
        D = canonize(T2)
        assert D.signature == ref
        assert D.flips


def test_random_walks_keep_signature():
    r = rng(9)
    for make in (fig8, sister):
        ref = canonize(make()).signature
        for _ in range(4):
            T = geometric_walk(relabel(make(), r), r, 4)
            assert canonize(T).signature == ref


def test_fixture_and_sibling_differ():
    assert canonize(fig8()).signature != canonize(sister()).signature
    assert manifolds_equal(fig8(), sister()) is False


def test_manifolds_equal(tmp_path):
    a = tmp_path / "a.tri"
    a.write_text(fig8().to_text())
    b = tmp_path / "b.tri"
    b.write_text(geometric_walk(fig8(), rng(4), 3).to_text())
    assert manifolds_equal(str(a), str(b))
    with pytest.raises(Undecided):
        manifolds_equal(fig8(), valence1())


def test_merge_across_transparent_faces():
    # subdivide the fig-8 bipyramid over face (0, 0) into three tetrahedra around
    # a new edge and declare the three new faces transparent
    T = fig8()
    z = solve(assemble_equations(T)).z
    T2, info, (t, a, b) = flip_2_3(T, (0, 0))
    z2 = carry_shapes(T, z, info, T2)
    ec = T2.edge_classes[T2.edge_index(t, a, b)]
    inner = {(s[0], s[3]) for s in ec.states} | {(s[0], s[4]) for s in ec.states}
    verdicts = [FaceVerdict(f, 0.0 if f in inner else -1.0, "transparent" if f in inner else "convex")
                for f in T2.faces()]
    D = decompose(T2, z2, verdicts)
    assert len(CellComplex(T2, inner).cells()) == 1
    assert D.n_cells == 1
    F = {(0, 0), T.partner((0, 0))}
    assert D.signature == complex_signature(T, F)
    # without the transparent face the fixture keeps its two cells
    assert complex_signature(T, F) != complex_signature(T)


def test_verdicts_do_not_depend_on_cusp_volume():
    for T, z in solved(3)[:30]:
        base = [fv.verdict for fv in face_verdicts(T, z, v=0.5)]
        for v in (0.125, 2.0):
            assert [fv.verdict for fv in face_verdicts(T, z, v=v)] == base
