"""Instance families: simplex, half-cube, random 0/1 points, hyperplane slices, random PIPs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .errors import BudgetExceeded, TooManyRequested
from .kernel.dd import h_to_v
from .kernel.reps import HRep, VRep
from .rng import derive_rng

PIP_MAX_N = 24


def gen_simplex(n: int) -> VRep:
    """conv{0, e_1, ..., e_n}."""
    if n < 1:
        raise ValueError("n must be positive")
    verts = [(0,) * n] + [tuple(int(i == j) for i in range(n)) for j in range(n)]
    return VRep(n, tuple(verts), meta={"family": "simplex", "n": n})


def halfcube_hrep(n: int) -> HRep:
    box = HRep.box([0] * n, [1] * n)
    return HRep(n, box.inequalities + (((1,) * n, Fraction(n, 2)),))


def gen_halfcube(n: int) -> VRep:
    """Vertices of ``{x in [0,1]^n : sum x <= n/2}`` for even n."""
    if n < 2 or n % 2:
        raise ValueError("half-cube needs an even n >= 2")
    V = h_to_v(halfcube_hrep(n), vertices_only=True)
    expected = sum(math.comb(n, w) for w in range(n // 2 + 1))
    if len(V.vertices) != expected:
        raise AssertionError(f"half-cube vertex count {len(V.vertices)} != {expected}")
    return VRep(n, V.vertices, meta={"family": "halfcube", "n": n})


def gen_random01(n: int, t: int, seed: int, distinct: bool = False) -> VRep:
    """t uniform points of {0,1}^n; duplicates are dropped and counted.

    With ``distinct`` the draw is repeated until t different points are found.
    """
    if n < 1 or t < 1 or t > 2 ** n:
        raise ValueError("need n >= 1 and 1 <= t <= 2^n")
    rng = derive_rng(seed, "random01", n, t)
    pts = []
    seen = set()
    draws = 0
    while True:
        p = tuple(int(x) for x in rng.integers(0, 2, size=n))
        draws += 1
        if p not in seen:
            seen.add(p)
            pts.append(p)
        if (distinct and len(pts) == t) or (not distinct and draws == t):
            break
    return VRep(n, tuple(pts), meta={"family": "random01", "n": n, "seed": seed,
                                     "requested": t, "distinct": len(pts)})


def _unrank_weight(rank: int, n: int, w: int) -> Tuple[int, ...]:
    """Lexicographic unranking of 0/1 vectors of weight w (1 before 0)."""
    out = []
    for i in range(n):
        if w == 0:
            out.append(0)
            continue
        c = math.comb(n - i - 1, w - 1)
        if rank < c:
            out.append(1)
            w -= 1
        else:
            rank -= c
            out.append(0)
    return tuple(out)


def gen_hyperplane_slice(n: int, w: int, t: int, seed: int) -> VRep:
    """t distinct uniform 0/1 points with exactly w ones."""
    if not 0 <= w <= n:
        raise ValueError("need 0 <= w <= n")
    total = math.comb(n, w)
    if t > total:
        raise TooManyRequested(f"only {total} points of weight {w} in dimension {n}")
    if t < 1:
        raise ValueError("t must be positive")
    rng = derive_rng(seed, "slice", n, w, t)
    ranks = rng.choice(total, size=t, replace=False)
    pts = tuple(_unrank_weight(int(r), n, w) for r in ranks)
    return VRep(n, pts, meta={"family": "slice", "n": n, "w": w, "seed": seed})


@dataclass(frozen=True)
class PipInstance:
    n: int
    m: int
    M: int
    A: Tuple[Tuple[int, ...], ...]
    rhs: Tuple[Fraction, ...]
    hull: VRep
    feasible: Tuple[Tuple[int, ...], ...]
    seed: int = 0

    def hrep(self) -> HRep:
        """The LP relaxation ``{x in [0,1]^n : A x <= rhs}``."""
        box = HRep.box([0] * self.n, [1] * self.n)
        return HRep(self.n, box.inequalities + tuple(zip(self.A, self.rhs)))


def _all01(n: int) -> np.ndarray:
    idx = np.arange(2 ** n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int64)


def pip_feasible_array(n: int, m: int, M: int, seed: int):
    """The matrix A, twice the right-hand sides, and the feasible 0/1 points as
    a numpy array; the same draw as :func:`gen_pip` without building the hull."""
    if n > PIP_MAX_N:
        raise BudgetExceeded(f"n = {n} > {PIP_MAX_N}: 2^n enumeration refused")
    if n < 1 or m < 1 or M < 0:
        raise ValueError("need n, m >= 1 and M >= 0")
    rng = derive_rng(seed, "pip", n, m, M)
    A = rng.integers(0, M + 1, size=(m, n))
    rhs2 = A.sum(axis=1)  # twice the right-hand side, kept integral
    X = _all01(n)
    ok = np.all(2 * (X @ A.T) <= rhs2[None, :], axis=1)
    return A, rhs2, X[ok]


def gen_pip(n: int, m: int, M: int, seed: int) -> PipInstance:
    """Random (n, m, M) packing IP: ``A x <= (row sums)/2`` with A uniform in {0..M}.

    The hull is the convex hull of all feasible 0/1 points found by enumeration.
    """
    A, rhs2, X = pip_feasible_array(n, m, M, seed)
    feas = [tuple(int(v) for v in row) for row in X]
    hull = _hull01(n, feas)
    return PipInstance(n, m, M, tuple(tuple(int(v) for v in r) for r in A),
                       tuple(Fraction(int(s), 2) for s in rhs2), hull, tuple(feas), seed)


def _hull01(n: int, pts) -> VRep:
    # every 0/1 point is a vertex of the cube, hence of any 0/1 hull containing it
    return VRep(n, tuple(pts), meta={"family": "pip"})
