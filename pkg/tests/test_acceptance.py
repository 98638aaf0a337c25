"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed as they are produced and again in the pytest terminal
summary.  ``python tests/test_acceptance.py`` runs the same checks without
pytest.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
import sys
import time
import warnings
from fractions import Fraction as F
from typing import Dict, List

import mpmath
import pytest

from oracles import brute_vertices, closure_oracle, mat_rank, primitive
from sparsecuts.bounds import bound_report, lb_theorem3
from sparsecuts.closure import monotone_halfspace_closure, sparse_closure
from sparsecuts.distance import cut_depth, exact_dist, shoot
from sparsecuts.exact import norm_sq
from sparsecuts.extform import build_tree_extform, check_prop3, random_extended_set, tau
from sparsecuts.instances import (gen_halfcube, gen_hyperplane_slice, gen_pip, gen_random01,
                                  gen_simplex)
from sparsecuts.kernel.dd import h_to_v, v_to_h
from sparsecuts.kernel.fm import project
from sparsecuts.kernel.ops import equal_sets
from sparsecuts.kernel.reps import HRep, VRep, cube
from sparsecuts.lab.validators import (anticoncentration_mc, cut_validity_frequency,
                                       order_statistics_mc)
from sparsecuts.sparsify import averaged_sparse_cut, verify_sparsifier_stats

REPORT: List[str] = []


def report(num: int, title: str, ok: bool, detail: str = "") -> bool:
    line = f"criterion {num:2d} {title}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" [{detail}]"
    REPORT.append(line)
    print(line)
    return ok


# --- shared corpus for criteria 3, 4, 5 and the PIP sweep of 11 -------------

def _corpus() -> List[tuple]:
    out = []
    for n in (3, 4, 5, 6):
        for seed in range(30):
            t = 3 + seed % min(2 ** n - 3, 18)
            out.append((f"random01 n={n} t={t} s={seed}", gen_random01(n, t, seed)))
    for seed in range(10):
        out.append((f"random01 n=7 t={8 + seed} s={seed}", gen_random01(7, 8 + seed, seed)))
    out.append(("random01 n=8 t=12 s=0", gen_random01(8, 12, 0)))
    for n in (4, 5, 6):
        for w in range(1, n):
            for seed in range(15 // (n - 1) + 1):
                t = min(math.comb(n, w), 3 + seed * 2)
                out.append((f"slice n={n} w={w} t={t} s={seed}", gen_hyperplane_slice(n, w, t, seed)))
    for n in (5, 6, 7):
        for m in (2, 3):
            for seed in range(5):
                out.append((f"pip n={n} m={m} s={seed}", gen_pip(n, m, 10, seed).hull))
    out.append(("pip n=8 m=3 s=0", gen_pip(8, 3, 10, 0).hull))
    return out


@functools.lru_cache(maxsize=None)
def corpus_results() -> List[Dict]:
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for idx, (label, P) in enumerate(_corpus()):
            n, t = P.dim, len(P.vertices)
            vnorm = math.sqrt(max(norm_sq(v) for v in P.vertices))
            for k in range(1, n + 1):
                C = sparse_closure(P, k, cube(n))
                dsq = exact_dist(P, C).dist_sq
                lb = shoot(P, C, num_dirs=20, seed=idx).best_lb_sq
                rep = bound_report(n, t, k, vnorm)
                rows.append({"label": label, "P": P, "k": k, "C": C, "dsq": dsq, "lb": lb,
                             "ub": min(rep.ub1, rep.ub2)})
    return rows


# --- criteria --------------------------------------------------------------

def test_criterion_01_simplex_exact():
    t0 = time.time()
    bad = []
    for n in range(2, 7):
        P = gen_simplex(n)
        for k in range(1, n + 1):
            got = exact_dist(P, sparse_closure(P, k, cube(n))).dist_sq
            if got != n * (F(1, k) - F(1, n)) ** 2:
                bad.append((n, k, got))
    dt = time.time() - t0
    ok = report(1, "simplex closed form", not bad and dt < 30, f"{dt:.1f}s, mismatches={bad}")
    assert ok


def _halfcube_want(n, k):
    return F(n, 4) if 2 * k <= n else n * (F(n, 2 * k) - F(1, 2)) ** 2


def test_criterion_02_halfcube_exact():
    bad = []
    for n in (2, 4, 6):
        P = gen_halfcube(n)
        for k in range(1, n + 1):
            got = exact_dist(P, sparse_closure(P, k, cube(n))).dist_sq
            if got != _halfcube_want(n, k):
                bad.append((n, k, got))
    assert report(2, "half-cube closed form", not bad, f"mismatches={bad}")


def test_criterion_03_upper_bound_sandwich():
    rows = corpus_results()
    instances = len({r["label"] for r in rows})
    bad = [(r["label"], r["k"]) for r in rows if math.sqrt(r["dsq"]) > r["ub"] + 1e-9]
    ok = instances >= 200 and not bad
    assert report(3, "sqrt(dist_sq) <= min(ub1, ub2)", ok,
                  f"{instances} instances, {len(rows)} (P, k) pairs, violations={bad[:5]}")


def test_criterion_04_shooting_sound_and_tight():
    rows = corpus_results()
    unsound = [(r["label"], r["k"]) for r in rows if r["lb"] > r["dsq"]]
    untight = []
    for name, gen, ns in (("simplex", gen_simplex, range(2, 7)), ("halfcube", gen_halfcube, (2, 4, 6))):
        for n in ns:
            P = gen(n)
            for k in range(1, n + 1):
                C = sparse_closure(P, k, cube(n))
                if shoot(P, C, num_dirs=0).best_lb_sq != exact_dist(P, C).dist_sq:
                    untight.append((name, n, k))
    ok = not unsound and not untight
    assert report(4, "shooting lb <= dist, exact on simplex and half-cube", ok,
                  f"{len(rows)} pairs, unsound={unsound[:5]}, not attained={untight}")


def test_criterion_05_cut_depth():
    rows = [r for r in corpus_results() if r["P"].dim <= 5]
    for name, gen, ns in (("simplex", gen_simplex, range(2, 7)), ("halfcube", gen_halfcube, (2, 4, 6))):
        for n in ns:
            P = gen(n)
            for k in range(1, n + 1):
                C = sparse_closure(P, k, cube(n))
                rows.append({"label": f"{name} n={n}", "P": P, "k": k, "C": C,
                             "dsq": exact_dist(P, C).dist_sq})
    facets = {}
    bad, checked = [], 0
    for r in rows:
        key = r["label"]
        if key not in facets:
            facets[key] = v_to_h(r["P"]).inequalities
        for a, b in facets[key]:
            checked += 1
            if cut_depth(a, b, r["C"]).normalized_sq > r["dsq"]:
                bad.append((key, r["k"], a, b))
    assert report(5, "cut depth <= dist_sq", not bad,
                  f"{checked} (facet, k) checks, violations={bad[:3]}")


def _criterion_6():
    t0 = time.time()
    observed, proj_ok = {}, {}
    for n in (2, 4, 8):
        P = gen_halfcube(n)
        observed[n] = {exact_dist(P, sparse_closure(P, k, cube(n))).dist_sq for k in range(1, n // 2 + 1)}
        proj_ok[n] = check_prop3(P, build_tree_extform(n).extended_set(), 3).proj_closure_equals_P
    return observed, proj_ok, time.time() - t0


@functools.lru_cache(maxsize=None)
def criterion_6_data():
    return _criterion_6()


@pytest.mark.xfail(strict=True, reason="the stated sqrt(n/2) is inconsistent with the half-cube; "
                                        "the exact value is sqrt(n)/2 (see the corrected test below)")
def test_criterion_06_tree_formulation():
    observed, proj_ok, dt = criterion_6_data()
    dist_ok = all(v == {F(n, 2)} for n, v in observed.items())
    ok = dist_ok and all(proj_ok.values()) and dt < 120
    detail = (f"dist_sq for k <= n/2: {{{', '.join(f'{n}: {sorted(map(str, v))}' for n, v in observed.items())}}} "
              f"vs stated n/2; proj_x(Q^3) == P: {proj_ok}; {dt:.1f}s")
    assert report(6, "dist_sq == n/2 and proj_x(Q^3) == P", ok, detail)


def test_criterion_06_corrected_value():
    observed, proj_ok, dt = criterion_6_data()
    assert all(v == {F(n, 4)} for n, v in observed.items())
    assert all(proj_ok.values()) and dt < 120


def test_criterion_07_extended_containment():
    bad = []
    for n in (2, 4):
        T = build_tree_extform(n)
        for k in (1, 2, 3):
            rep = check_prop3(gen_halfcube(n), T.extended_set(), k)
            if not (rep.proj_equals_P and rep.contained):
                bad.append(("tree", n, k))
    for seed in range(20):
        E, P = random_extended_set(2, 2, 6, seed)
        for k in (1, 2, 3):
            rep = check_prop3(P, E, k)
            if not (rep.proj_equals_P and rep.contained):
                bad.append(("random", seed, k))
    tau_bad = []
    for seed in range(20):
        E, _ = random_extended_set(3, 1, 6, seed)
        n, dim = E.n, E.Q.dim
        for r in range(1, dim + 1):
            for I in itertools.combinations(range(dim), r):
                Ix = tuple(i for i in I if i < n)
                rhs = project(tau(E.Q, I), E.x_indices)
                if not Ix:
                    same = not rhs.inequalities and not rhs.equations
                else:
                    same = equal_sets(tau(E.proj_x(), Ix), rhs)
                if not same:
                    tau_bad.append((seed, I))
    ok = not bad and not tau_bad
    assert report(7, "proj_x(Q^k) within P^k; tau commutes with projection", ok,
                  f"containment failures={bad}, tau failures={tau_bad[:5]}")


def test_criterion_08_sparsifier_statistics():
    grid = [(8, 2), (8, 6), (16, 4), (16, 12), (64, 48)]
    bad, in_regime = [], 0
    for n, k in grid:
        s = math.isqrt(n - 1) + 1
        ds = [tuple(F(1, s) for _ in range(n)),
              tuple(F(i + 1, n * s) * (-1) ** i for i in range(n)),
              (F(3, 5), F(-4, 5)) + (F(0),) * (n - 2)]
        for j, d in enumerate(ds):
            probes = [(1,) * n, (1,) + (0,) * (n - 1)]
            st = verify_sparsifier_stats(d, k, n, probes, trials=10 ** 5, seed=100 * n + 10 * k + j)
            for p in st.probes:
                if not (p.mean_ok and p.envelope_ok):
                    bad.append((n, k, j, "mean" if not p.mean_ok else "envelope"))
            if st.in_regime:
                in_regime += 1
                if not st.sparsity_ok:
                    bad.append((n, k, j, "sparsity", st.support_exceed_freq))
    assert report(8, "sparsifier mean, sparsity and envelope", not bad,
                  f"{len(grid) * 3} (n,k,d) cells, {in_regime} in the sparsity regime, failures={bad}")


def test_criterion_09_averaged_cut():
    rnd = random.Random(9)
    bad, done = [], 0
    while done < 50:
        n = rnd.choice((2, 3, 3, 4, 4, 5, 5, 6, 7, 8)) if done < 45 else rnd.choice((7, 8))
        a = [rnd.randint(0, 3) for _ in range(n)]
        if not any(a):
            continue
        l1 = sum(a)
        b = rnd.randint(-l1 + 1, l1 - 1)
        k = rnd.randint(1, n)
        if n >= 7:
            k = rnd.choice((1, n - 1, n))
        box = ((-1,) * n, (1,) * n)
        cut = averaged_sparse_cut(a, b, n, k)
        if cut.rhs != b + (F(n, k) - 1) * (b + l1):
            bad.append(("rhs", a, b, k))
        C = monotone_halfspace_closure(a, b, k, box=box)
        for v in h_to_v(C.closure, vertices_only=True).vertices:
            if sum(x * y for x, y in zip(a, v)) > cut.rhs:
                bad.append(("closure", a, b, k))
                break
        P = h_to_v(HRep(n, ((tuple(a), b),)).intersect(HRep.box(*box)), vertices_only=True)
        for I in itertools.combinations(range(n), k):
            coef, rhs = cut.member(I)
            if any(sum(x * y for x, y in zip(coef, v)) > rhs for v in P.vertices):
                bad.append(("member", a, b, k, I))
        done += 1
    assert report(9, "averaged cut valid for P^k; family valid for P", not bad,
                  f"{done} instances, failures={bad[:3]}")


def test_criterion_10_anticoncentration():
    bad = []
    cases = 0
    for n in (16, 32):
        for name, a in (("e", [1.0] * n), ("graded", [(i + 1) / n for i in range(n)])):
            for alpha in (0.1, 0.25, 0.5):
                rep = anticoncentration_mc(a, alpha, 10 ** 6, seed=n + int(alpha * 100))
                cases += 1
                if not rep.ok:
                    bad.append((n, name, alpha))
    assert report(10, "anticoncentration lower bound", not bad, f"{cases} cases, failures={bad}")


def _hand_theorem3(n, m, M, k):
    mpmath.mp.dps = 40
    n, m, M, k = map(mpmath.mpf, (n, m, M, k))
    c = k / n
    inv_alpha = M / (2 * (M + 1)) * (n - 2 * mpmath.sqrt(n * mpmath.log(8 * m))) / (
        c * ((2 - c) * n + 1) + 2 * mpmath.sqrt(10 * c * n * m))
    alpha = 1 / inv_alpha
    eps = 24 * mpmath.sqrt(mpmath.log(4 * n ** 2 * m)) / mpmath.sqrt(n)
    eps_p = 3 * mpmath.sqrt(mpmath.log(8 * n)) / (mpmath.sqrt(m) - 2 * mpmath.sqrt(mpmath.log(8 * n)))
    return mpmath.sqrt(n) / 2 * (2 / max(alpha, 1) * (1 - eps) ** 2 - (1 + eps_p))


def test_criterion_11_pip():
    notes, ok = [], True
    os_rep = order_statistics_mc(16, 10 ** 5, seed=11)
    ok &= os_rep.ok
    notes.append(f"order stats ok={os_rep.ok}")
    freq = cut_validity_frequency(16, 4, 10, range(100))
    ok &= freq["frequency"] >= 0.5
    notes.append(f"cut validity frequency={freq['frequency']:.2f} vs threshold "
                 f"{freq['claimed_threshold']}, regime_mismatch={freq['regime_mismatch']}")
    worst = 0.0
    for params in ((10 ** 4, 100, 100, 5000), (10 ** 6, 200, 10, 250000), (400, 60, 5, 100)):
        got = lb_theorem3(*params, quiet=True)[0]
        want = _hand_theorem3(*params)
        worst = max(worst, float(abs((got - want) / want)))
    ok &= worst <= 1e-12
    notes.append(f"lb evaluator max rel err={worst:.1e}")
    by_inst: Dict[str, list] = {}
    for r in corpus_results():
        if r["label"].startswith("pip"):
            by_inst.setdefault(r["label"], []).append(r)
    sweep_bad = []
    for label, rs in by_inst.items():
        rs.sort(key=lambda r: r["k"])
        d = [r["dsq"] for r in rs]
        if any(x < y for x, y in zip(d, d[1:])) or d[-1] != 0:
            sweep_bad.append(label)
    ok &= not sweep_bad
    notes.append(f"{len(by_inst)} PIP sweeps (n <= 8), non-monotone or nonzero at k=n: {sweep_bad}")
    assert report(11, "PIP checks", bool(ok), "; ".join(notes))


def _point_sets(count_per_dim: int):
    rnd = random.Random(12)
    for d in (2, 3, 4, 5):
        made = 0
        while made < count_per_dim:
            npts = rnd.randint(d + 1, 12)
            pts = sorted({tuple(rnd.randint(0, 3) for _ in range(d)) for _ in range(npts)})
            if len(pts) <= d or mat_rank([[x - y for x, y in zip(p, pts[0])] for p in pts]) != d:
                continue
            made += 1
            yield d, pts


def test_criterion_12_oracle_equivalence():
    bad, cases = [], 0
    for d, pts in _point_sets(12):
        P = VRep(d, tuple(pts))
        if len(P.vertices) > 12:
            continue
        lo = [min(p[i] for p in pts) for i in range(d)]
        hi = [max(p[i] for p in pts) for i in range(d)]
        for k in range(1, d + 1):
            cases += 1
            C = sparse_closure(P, k, (lo, hi))
            rows = closure_oracle(pts, k, lo, hi)
            keys = {tuple(a) + (b,) for a, b in rows}
            # every facet of the package closure is an oracle row ...
            same = all(primitive(list(a) + [b]) in keys for a, b in C.closure.inequalities)
            for a, b in C.closure.equations:
                same &= primitive(list(a) + [b]) in keys and primitive([-x for x in a] + [-b]) in keys
            # ... and every package vertex satisfies every oracle row
            same &= all(sum(F(x) * y for x, y in zip(a, v)) <= b for a, b in rows for v in C.vertices.vertices)
            if same and d <= 3:
                same = brute_vertices(rows, d) == set(C.vertices.vertices)
            if not same:
                bad.append((d, pts, k))
    assert report(12, "sparse_closure equals the Fourier-Motzkin oracle", not bad,
                  f"{cases} (P, k) cases in dims 2-5, failures={bad[:2]}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion") and callable(fn) and name != "test_criterion_06_corrected_value":
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
