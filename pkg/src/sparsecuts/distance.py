"""Exact dist(P, Q) for polytopes P ⊆ Q, shooting lower bounds, and cut depth."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

from .closure import ClosureResult
from .errors import BudgetExceeded, DimensionMismatch
from .exact import RatVec, dot, from_mpq, norm_sq, rat, ratvec, to_mpq
from .kernel.dd import h_to_v
from .kernel.ops import member
from .kernel.reps import HRep, VRep
from .lp import WarmLP, maximize
from .rng import derive_rng

DEFAULT_VERTEX_CAP = 200_000
DIR_SCALE = 1 << 20


@dataclass(frozen=True)
class DistanceReport:
    dist_sq: Fraction
    witness: Optional[RatVec]
    nearest: Optional[RatVec]
    vertices_checked: int = 0

    @property
    def dist_float(self) -> float:
        return math.sqrt(self.dist_sq)


@dataclass
class ShootingRecord:
    direction: Tuple[int, ...]
    gap: Fraction
    norm_sq: Fraction

    @property
    def lb_sq(self) -> Fraction:
        return self.gap * self.gap / self.norm_sq


@dataclass
class ShootingReport:
    best_lb_sq: Fraction
    best_direction: Optional[Tuple[int, ...]]
    directions_tried: int
    records: List[ShootingRecord] = field(default_factory=list, repr=False)

    @property
    def best_lb_float(self) -> float:
        return math.sqrt(self.best_lb_sq)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["dir_index", "gap_num", "gap_den", "norm_sq_num", "norm_sq_den", "lb_sq_float"])
            for i, r in enumerate(self.records):
                w.writerow([i, r.gap.numerator, r.gap.denominator,
                            r.norm_sq.numerator, r.norm_sq.denominator, float(r.lb_sq)])


def _qsum(xs) -> mpq:
    return sum(xs, mpq(0))


def _solve_mpq(G: List[List[mpq]], rhs: List[mpq]) -> Optional[List[mpq]]:
    """Gauss-Jordan on a small square mpq system; None when singular."""
    n = len(G)
    M = [row[:] + [v] for row, v in zip(G, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            f = M[r][c]
            if r != c and f != 0:
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def _min_norm_point(Q: List[RatVec]) -> Tuple[RatVec, List[int], List[Fraction]]:
    """Wolfe's minimum-norm point of conv(Q), exactly.

    Returns the point, the indices of the final corral and their weights.
    Arithmetic runs in gmpy2 rationals with a lazily filled Gram matrix.
    """
    dim = len(Q[0])
    Qm = [tuple(to_mpq(x) for x in q) for q in Q]
    gram = {}

    def g(a, b):
        key = (a, b) if a <= b else (b, a)
        v = gram.get(key)
        if v is None:
            v = gram[key] = _qsum(x * y for x, y in zip(Qm[a], Qm[b]))
        return v

    start = min(range(len(Q)), key=lambda j: (g(j, j), Q[j]))
    S = [start]
    lam = [mpq(1)]
    y = Qm[start]
    while True:
        yy = _qsum(x * x for x in y)
        if yy == 0:
            break
        vals = [_qsum(a * b for a, b in zip(y, q)) for q in Qm]
        j = min(range(len(Q)), key=lambda j: (vals[j], j))
        if vals[j] >= yy or j in S:
            break
        S.append(j)
        lam.append(mpq(0))
        while True:
            m = len(S)
            G = [[g(a, b) for b in S] + [mpq(1)] for a in S]
            G.append([mpq(1)] * m + [mpq(0)])
            sol = _solve_mpq(G, [mpq(0)] * m + [mpq(1)])
            if sol is None:
                raise AssertionError("corral lost affine independence")
            mu = sol[:m]
            if all(v > 0 for v in mu):
                lam = mu
                break
            theta = min(lam[i] / (lam[i] - mu[i]) for i in range(m) if mu[i] <= 0)
            lam = [theta * u + (1 - theta) * l for u, l in zip(mu, lam)]
            keep = [i for i in range(m) if lam[i] > 0]
            S = [S[i] for i in keep]
            lam = [lam[i] for i in keep]
        y = tuple(_qsum(l * Qm[s][i] for s, l in zip(S, lam)) for i in range(dim))
    return tuple(from_mpq(x) for x in y), S, [from_mpq(x) for x in lam]


def nearest_point(x: Sequence, P: VRep) -> Tuple[RatVec, Fraction]:
    """Exact Euclidean projection of x onto conv(P.vertices) and the squared distance."""
    x = ratvec(x)
    if len(x) != P.dim:
        raise DimensionMismatch(f"point of length {len(x)} vs dim {P.dim}")
    if not P.bounded:
        raise ValueError("nearest_point needs a bounded P")
    if x in P.vertex_set():
        return x, Fraction(0)
    Q = [tuple(a - b for a, b in zip(v, x)) for v in P.vertices]
    y, _, _ = _min_norm_point(Q)
    return tuple(a + b for a, b in zip(y, x)), norm_sq(y)


def _outer_vertices(Q, cap: int) -> Tuple[RatVec, ...]:
    if isinstance(Q, ClosureResult):
        V = Q.vertices if Q.vertices is not None else h_to_v(Q.closure, vertices_only=True)
    elif isinstance(Q, HRep):
        V = h_to_v(Q, vertices_only=True)
    else:
        V = Q
    if not V.bounded:
        raise ValueError("outer set must be bounded")
    if len(V.vertices) > cap:
        raise BudgetExceeded(f"{len(V.vertices)} vertices exceed cap {cap}")
    return V.vertices


def _outer_hrep(Q) -> Optional[HRep]:
    if isinstance(Q, ClosureResult):
        return Q.closure
    if isinstance(Q, HRep):
        return Q
    return None


def exact_dist(P: VRep, Q: Union[HRep, ClosureResult, VRep], cap: int = DEFAULT_VERTEX_CAP,
               P_hrep: Optional[HRep] = None) -> DistanceReport:
    """max over vertices w of Q of dist(w, P), exactly, with lexicographic tie-break.

    ``P_hrep`` lets vertices of Q that already lie in P be skipped cheaply.
    """
    verts = _outer_vertices(Q, cap)
    QH = _outer_hrep(Q)
    if QH is not None and not all(member(QH, v) for v in P.vertices):
        raise ValueError("outer set does not contain P")
    best: Optional[Tuple[Fraction, RatVec, RatVec]] = None
    Pv = P.vertex_set()
    for w in sorted(verts):
        if w in Pv or (P_hrep is not None and member(P_hrep, w)):
            y, d = w, Fraction(0)
        else:
            y, d = nearest_point(w, P)
        if best is None or d > best[0]:
            best = (d, w, y)
    return DistanceReport(best[0], best[1], best[2], len(verts))


def random_directions(n: int, count: int, seed: int) -> List[Tuple[int, ...]]:
    """Integer directions uniform in [-2^20, 2^20]^n; the scale 2^-20 cancels in every ratio."""
    rng = derive_rng(seed, "shoot", n)
    out = []
    while len(out) < count:
        u = tuple(int(v) for v in rng.integers(-DIR_SCALE, DIR_SCALE, size=n, endpoint=True))
        if any(u):
            out.append(u)
    return out


def shoot(P: VRep, Q: Union[HRep, ClosureResult], num_dirs: int = 1000, seed: int = 0,
          extra_dirs: Iterable[Sequence] = (), include_ones: bool = True) -> ShootingReport:
    """Lower bound dist(P, Q)^2 by max over u of (max_Q u.x - max_P u.x)^2 / |u|^2."""
    QH = _outer_hrep(Q)
    n = P.dim
    dirs: List[Tuple] = []
    if include_ones:
        dirs += [(1,) * n, (-1,) * n]
    dirs += [ratvec(u) for u in extra_dirs]
    dirs += random_directions(n, num_dirs, seed)
    lp = WarmLP(QH)
    best, best_dir = Fraction(0), None
    records = []
    for u in dirs:
        res = lp.maximize(u)
        if not res.optimal:
            raise ValueError(f"outer set is not bounded in direction {u}")
        pmax = max(dot(u, v) for v in P.vertices)
        gap = max(Fraction(0), res.value - pmax)
        rec = ShootingRecord(tuple(u), gap, norm_sq(u))
        records.append(rec)
        if best_dir is None or rec.lb_sq > best:
            best, best_dir = rec.lb_sq, tuple(u)
    return ShootingReport(best, best_dir, len(dirs), records)


@dataclass(frozen=True)
class CutDepth:
    gamma: Fraction  # max(0, max_Q alpha.x - beta)
    alpha_norm_sq: Fraction

    @property
    def gamma_sq(self) -> Fraction:
        return self.gamma * self.gamma

    @property
    def normalized_sq(self) -> Fraction:
        return self.gamma_sq / self.alpha_norm_sq


def cut_depth(alpha: Sequence, beta, Q: Union[HRep, ClosureResult]) -> CutDepth:
    """Depth of the cut ``alpha x <= beta`` relative to Q, in squared form."""
    alpha, beta = ratvec(alpha), rat(beta)
    if not any(alpha):
        raise ValueError("alpha must be nonzero")
    res = maximize(alpha, _outer_hrep(Q))
    if not res.optimal:
        raise ValueError(f"LP over Q is {res.status.value}")
    return CutDepth(max(Fraction(0), res.value - beta), norm_sq(alpha))
