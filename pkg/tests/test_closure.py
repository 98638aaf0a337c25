import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from oracles import brute_vertices, closure_oracle
from sparsecuts.closure import (SupportSet, facet_normal_audit, free_term, monotone_halfspace_closure,
                                sampled_closure, sparse_closure, unrank_combination)
from sparsecuts.errors import BudgetExceeded, Infeasible, NegativeCoefficient
from sparsecuts.instances import gen_halfcube, gen_random01, gen_simplex
from sparsecuts.kernel.ops import contains, equal_sets, member
from sparsecuts.kernel.reps import HRep, VRep, cube
from strategies import full_dim_point_sets, point_sets


def bbox(pts):
    d = len(pts[0])
    return [min(p[i] for p in pts) for i in range(d)], [max(p[i] for p in pts) for i in range(d)]


def test_support_set():
    S = SupportSet((2, 0))
    assert S.indices == (0, 2) and S.k == 2 and S.complement(4) == (1, 3)
    with pytest.raises(ValueError):
        SupportSet(())


def test_free_term_on_simplex():
    P = gen_simplex(2)
    H = free_term(P, (0,))
    assert equal_sets(H.intersect(HRep.box(*cube(2))), VRep(2, ((0, 0), (1, 0), (0, 1), (1, 1))))


@given(full_dim_point_sets(max_dim=3, max_points=8), st.data())
def test_closure_matches_fm_oracle(dp, data):
    d, pts = dp
    k = data.draw(st.integers(1, d))
    lo, hi = bbox(pts)
    C = sparse_closure(VRep(d, pts), k, (lo, hi))
    assert brute_vertices(closure_oracle(pts, k, lo, hi), d) == set(C.vertices.vertices)


@given(point_sets(max_dim=4, max_points=7), st.data())
def test_closure_sandwich_and_provenance(dp, data):
    d, pts = dp
    k = data.draw(st.integers(1, d))
    P = VRep(d, pts)
    lo, hi = bbox(pts)
    C = sparse_closure(P, k, (lo, hi))
    assert contains(C.closure, P)
    assert contains(HRep.box(lo, hi), C.vertices)
    for a, b in C.closure.inequalities:
        S = C.support_of(a, b)
        assert {i for i, x in enumerate(a) if x} <= set(S.indices)
        assert all(sum(x * y for x, y in zip(a, v)) <= b for v in pts)
    if k == d:
        assert equal_sets(C.closure, P)


@given(point_sets(max_dim=4, max_points=7))
def test_closure_monotone_in_k(dp):
    d, pts = dp
    P = VRep(d, pts)
    box = bbox(pts)
    prev = None
    for k in range(1, d + 1):
        C = sparse_closure(P, k, box)
        if prev is not None:
            assert contains(prev.closure, C.vertices)
        prev = C


def test_simplex_closure_k1_is_box():
    C = sparse_closure(gen_simplex(3), 1, cube(3))
    assert equal_sets(C.closure, HRep.box(*cube(3)))
    assert facet_normal_audit(C).ok


def test_halfcube_closure():
    P = gen_halfcube(4)
    assert equal_sets(sparse_closure(P, 2, cube(4)).closure, HRep.box(*cube(4)))
    C3 = sparse_closure(P, 3, cube(4))
    assert member(C3.closure, (F(2, 3),) * 4) and not member(C3.closure, (F(3, 4),) * 4)


def test_budget_and_bad_k():
    with pytest.raises(BudgetExceeded):
        sparse_closure(gen_simplex(6), 3, cube(6), budget=10)
    with pytest.raises(ValueError):
        sparse_closure(gen_simplex(3), 0, cube(3))
    with pytest.raises(ValueError):
        sparse_closure(gen_simplex(3), 1, cube(3, 0, F(1, 2)))


@given(st.integers(1, 7), st.data())
def test_unrank_is_lexicographic_bijection(n, data):
    k = data.draw(st.integers(1, n))
    combos = list(itertools.combinations(range(n), k))
    assert [unrank_combination(r, n, k) for r in range(len(combos))] == combos


def test_sampled_closure_outer_and_exact():
    P = gen_simplex(4)
    full = sparse_closure(P, 2, cube(4))
    part = sampled_closure(P, 2, cube(4), 3, seed=5)
    assert part.outer_approx and part.supports_used == 3
    assert contains(part.closure, full.vertices)
    again = sampled_closure(P, 2, cube(4), 3, seed=5)
    assert again.closure == part.closure
    every = sampled_closure(P, 2, cube(4), 99, seed=1)
    assert not every.outer_approx and equal_sets(every.closure, full.closure)
    explicit = sampled_closure(P, 2, cube(4), 1, seed=0, supports=[(0, 1)])
    assert explicit.supports_used == 1


@given(st.lists(st.integers(0, 4), min_size=2, max_size=5), st.integers(0, 8), st.data())
def test_monotone_closure_matches_general(a, b, data):
    n = len(a)
    k = data.draw(st.integers(1, n))
    if not any(a):
        return
    H = HRep(n, ((tuple(a), b),)).intersect(HRep.box(*cube(n)))
    from sparsecuts.kernel.dd import h_to_v
    P = h_to_v(H, vertices_only=True)
    assert equal_sets(monotone_halfspace_closure(a, b, k).closure,
                      sparse_closure(P, k, cube(n)).closure)


def test_monotone_closure_errors():
    with pytest.raises(NegativeCoefficient):
        monotone_halfspace_closure((1, -1), 1, 1)
    with pytest.raises(Infeasible):
        monotone_halfspace_closure((1, 1), -1, 1)


@given(full_dim_point_sets(max_dim=4, max_points=8, hi=1), st.data())
def test_01_facet_normals_audit(dp, data):
    d, pts = dp
    k = data.draw(st.integers(1, d))
    C = sparse_closure(VRep(d, pts), k, cube(d))
    audit = facet_normal_audit(C)
    assert audit.max_sparsity <= k
    assert audit.ok


@pytest.mark.parametrize("seed", range(4))
def test_reduce_modes_agree(seed):
    P = gen_random01(4, 7, seed)
    dd = sparse_closure(P, 2, cube(4))
    lp = sparse_closure(P, 2, cube(4), reduce="lp")
    raw = sparse_closure(P, 2, cube(4), reduce="none")
    assert lp.vertices is None and raw.vertices is None
    # without equations LP reduction leaves exactly the facets
    if not dd.closure.equations:
        assert set(lp.closure.inequalities) == set(dd.closure.inequalities)
    assert equal_sets(lp.closure, dd.closure) and equal_sets(raw.closure, dd.closure)
    assert len(raw.closure.inequalities) >= len(dd.closure.inequalities)


def test_reduce_mode_rejected():
    with pytest.raises(ValueError):
        sparse_closure(gen_simplex(3), 2, cube(3), reduce="magic")
