from fractions import Fraction as F

import pytest
from hypothesis import given

from oracles import brute_facets, brute_vertices, mat_rank
from sparsecuts.errors import DimensionMismatch, Infeasible
from sparsecuts.exact import to_primitive_ints
from sparsecuts.kernel.dd import h_to_v, reduce_hrep, v_to_h
from sparsecuts.kernel.fm import project
from sparsecuts.kernel.io import hrep_from_json, hrep_to_json, load, save, vrep_from_json, vrep_to_json
from sparsecuts.kernel.linalg import inverse, nullspace, rank, rref, solve_affine
from sparsecuts.kernel.ops import contains, equal_sets, member
from sparsecuts.kernel.reps import HRep, VRep, cube
from strategies import full_dim_point_sets, point_sets


def prim_rows(H):
    return {to_primitive_ints(tuple(a) + (b,)) for a, b in H.inequalities}


@given(point_sets(max_dim=4, max_points=8))
def test_rank_matches_oracle(dp):
    d, pts = dp
    assert rank(pts) == mat_rank(pts)
    for v in nullspace(pts, d):
        assert all(sum(F(a) * b for a, b in zip(p, v)) == 0 for p in pts)
    assert len(nullspace(pts, d)) == d - mat_rank(pts)


def test_rref_and_inverse():
    R, piv = rref([[2, 4], [1, 3]])
    assert piv == [0, 1] and R == [[1, 0], [0, 1]]
    assert inverse([[2, 0], [0, 4]]) == [[F(1, 2), 0], [0, F(1, 4)]]
    assert inverse([[1, 2], [2, 4]]) is None
    x0, N, _ = solve_affine([[1, 1]], [2], 2)
    assert sum(x0) == 2 and len(N) == 1
    assert solve_affine([[1, 1], [1, 1]], [1, 2], 2) is None


@given(full_dim_point_sets(max_dim=4, max_points=9))
def test_v_to_h_matches_brute_facets(dp):
    d, pts = dp
    H = v_to_h(VRep(d, pts))
    assert not H.equations
    assert prim_rows(H) == brute_facets(pts)


@given(full_dim_point_sets(max_dim=3, max_points=8))
def test_h_to_v_matches_brute_vertices(dp):
    d, pts = dp
    facets = brute_facets(pts)
    rows = [(r[:-1], r[-1]) for r in facets]
    V = h_to_v(HRep(d, tuple(rows)))
    assert V.bounded
    assert set(V.vertices) == brute_vertices(rows, d)


@given(point_sets(max_dim=4, max_points=7))
def test_round_trip_any_dimension(dp):
    d, pts = dp
    P = VRep(d, pts)
    H = v_to_h(P)
    V = h_to_v(H, vertices_only=True)
    # vertices of conv(pts) are exactly the points not in the hull of the others
    assert set(V.vertices) <= set(P.vertices)
    assert all(member(H, p) for p in pts)
    assert equal_sets(H, P)


def test_low_dimensional_and_empty():
    seg = VRep(3, ((0, 0, 0), (1, 1, 1)))
    H = v_to_h(seg)
    assert len(H.equations) == 2
    assert set(h_to_v(H).vertices) == set(seg.vertices)
    empty = HRep(1, (((1,), 0), ((-1,), -1)))
    with pytest.raises(Infeasible):
        h_to_v(empty)


def test_unbounded_h_to_v():
    H = HRep(2, (((-1, 0), 0), ((0, -1), 0)))
    V = h_to_v(H)
    assert V.vertices == ((0, 0),)
    assert set(V.rays) == {(1, 0), (0, 1)}
    line = h_to_v(HRep(2, (((1, 0), 1), ((-1, 0), 0))))
    assert len(line.lineality) == 1


def test_reduce_removes_redundant_rows():
    H = HRep.box(*cube(2)).intersect(HRep(2, (((1, 1), 5),)))
    R, V = reduce_hrep(H)
    assert len(R.inequalities) == 4 and len(V.vertices) == 4


def projection_oracle(pts, keep):
    return brute_facets(sorted({tuple(p[i] for i in keep) for p in pts}))


@given(full_dim_point_sets(min_dim=3, max_dim=4, max_points=9))
def test_fm_projection_matches_oracle(dp):
    d, pts = dp
    H = v_to_h(VRep(d, pts))
    keep = (0, d - 1)
    Pj = project(H, keep)
    assert prim_rows(Pj) == projection_oracle(pts, keep)


def test_fm_with_equations_and_infeasible():
    # x + y = 1, z = x, 0 <= x, y;  project to z
    H = HRep(3, (((-1, 0, 0), 0), ((0, -1, 0), 0)), (((1, 1, 0), 1), ((1, 0, -1), 0)))
    Z = project(H, (2,))
    assert equal_sets(Z, VRep(1, ((0,), (1,))))
    bad = HRep(2, (((1, 1), 0), ((-1, 0), -1), ((0, -1), -1)))
    assert project(bad, (0,)).infeasible


def test_member_contains_dimension_checks():
    H = HRep.box(*cube(2))
    assert member(H, (F(1, 2), 1)) and not member(H, (2, 0))
    assert contains(H, VRep(2, ((0, 0), (1, 1))))
    with pytest.raises(DimensionMismatch):
        HRep(2, (((1, 0, 0), 1),))


def test_io_round_trip(tmp_path):
    P = VRep(2, ((0, 0), (F(1, 3), 1)))
    H = HRep(2, (((1, 0), F(1, 2)),), (((0, 1), 0),))
    assert vrep_from_json(vrep_to_json(P)) == P
    assert hrep_from_json(hrep_to_json(H)) == H
    save(P, tmp_path / "p.json")
    save(H, tmp_path / "h.json")
    assert load(tmp_path / "p.json") == P and load(tmp_path / "h.json") == H
