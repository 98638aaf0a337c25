"""A quick self-check run by ``sparsecuts validate``: small exact identities
plus reduced-trial Monte Carlo checks.  The full suite lives in tests/."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List

from ..closure import monotone_halfspace_closure, sparse_closure
from ..distance import exact_dist, shoot
from ..instances import gen_halfcube, gen_random01, gen_simplex
from ..kernel.reps import cube
from ..sparsify import averaged_sparse_cut, verify_sparsifier_stats
from .validators import anticoncentration_mc, order_statistics_mc


def _simplex_exact() -> bool:
    for n in range(2, 5):
        P = gen_simplex(n)
        for k in range(1, n + 1):
            want = n * (Fraction(1, k) - Fraction(1, n)) ** 2
            if exact_dist(P, sparse_closure(P, k, cube(n))).dist_sq != want:
                return False
    return True


def _halfcube_exact() -> bool:
    for n in (2, 4):
        P = gen_halfcube(n)
        for k in range(1, n + 1):
            want = Fraction(n, 4) if 2 * k <= n else n * (Fraction(n, 2 * k) - Fraction(1, 2)) ** 2
            if exact_dist(P, sparse_closure(P, k, cube(n))).dist_sq != want:
                return False
    return True


def _shooting_sound(seed: int) -> bool:
    P = gen_random01(5, 10, seed)
    for k in (2, 3):
        C = sparse_closure(P, k, cube(5))
        if shoot(P, C, num_dirs=50, seed=seed).best_lb_sq > exact_dist(P, C).dist_sq:
            return False
    return True


def _averaged_cut() -> bool:
    a, b, n, k = (1, 2, 1, 3), 2, 4, 2
    C = monotone_halfspace_closure(a, b, k, box=((-1,) * n, (1,) * n))
    cut = averaged_sparse_cut(a, b, n, k)
    from ..kernel.dd import h_to_v
    return all(sum(x * y for x, y in zip(cut.a, v)) <= cut.rhs
               for v in h_to_v(C.closure, vertices_only=True).vertices)


def _sparsifier(seed: int, trials: int) -> bool:
    st = verify_sparsifier_stats((Fraction(1, 2), Fraction(-1, 3), 0, Fraction(1, 4), Fraction(1, 5), 0),
                                 3, 6, [(1,) * 6], trials=max(trials, 1000), seed=seed)
    return all(p.mean_ok and p.var_ok and p.envelope_ok for p in st.probes)


def _anticoncentration(seed: int, trials: int) -> bool:
    return anticoncentration_mc([1] * 16, 0.25, trials, seed).ok


def _order_stats(seed: int, trials: int) -> bool:
    return order_statistics_mc(10, trials, seed).ok


def run_suite(seed: int = 0, trials: int = 20_000) -> List[Dict]:
    checks: List[tuple] = [
        ("simplex-exact", lambda: _simplex_exact()),
        ("halfcube-exact", lambda: _halfcube_exact()),
        ("shooting-sound", lambda: _shooting_sound(seed)),
        ("averaged-cut-valid", lambda: _averaged_cut()),
        ("sparsifier-stats", lambda: _sparsifier(seed, trials)),
        ("anticoncentration", lambda: _anticoncentration(seed, trials)),
        ("order-statistics", lambda: _order_stats(seed, trials)),
    ]
    out = []
    for name, fn in checks:
        try:
            ok = bool(fn())
            out.append({"name": name, "ok": ok})
        except Exception as exc:  # reported, not raised: the suite aggregates
            out.append({"name": name, "ok": False, "error": f"{type(exc).__name__}: {exc}"})
    return out
