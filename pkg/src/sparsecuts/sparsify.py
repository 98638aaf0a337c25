"""Random sparsification of a direction and the averaged k-sparse cut.

With ``alpha = k / (2 sqrt n)``, coordinate i of the sparsifier is ``d_i``
when ``alpha |d_i| >= 1`` and otherwise ``sign(d_i)/alpha`` with probability
``alpha |d_i|`` (0 else).  Because alpha involves sqrt(n), values are kept as
:class:`QuadRat` numbers and every probability test is an exact integer
comparison: a uniform 64-bit U is accepted iff ``U <= isqrt(2^128 p^2)``,
i.e. ``U / 2^64 <= p`` with the boundary counted as acceptance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .distance import nearest_point
from .errors import DegenerateBox, DimensionMismatch, NormTooLarge, NotSeparated
from .exact import QuadRat, RatVec, dot, norm_sq, rat, ratvec, sign, to_primitive_ints
from .kernel.reps import VRep
from .rng import derive_rng, uint64s

TWO128 = 1 << 128


def _threshold(p_sq: Fraction) -> Optional[int]:
    """Largest accepted U for success probability p, or None when p >= 1."""
    if p_sq >= 1:
        return None
    x = p_sq * TWO128
    return math.isqrt(x.numerator // x.denominator)


def _plan(w: Sequence[Fraction], k: int, n: int, scale_sq: Fraction):
    """Per-coordinate plan for direction d = w / sqrt(scale_sq).

    Returns a list of (deterministic, threshold) pairs.  ``p_i^2`` is
    ``k^2 w_i^2 / (4 n scale_sq)``.
    """
    out = []
    for wi in w:
        p_sq = Fraction(k * k) * wi * wi / (4 * n * scale_sq)
        if p_sq >= 1:
            out.append((True, None))
        else:
            out.append((False, _threshold(p_sq)))
    return out


@dataclass
class SparsifierSample:
    d: RatVec
    k: int
    n: int
    sample: Tuple[QuadRat, ...]
    support_size: int
    deterministic: Tuple[bool, ...] = field(repr=False, default=())

    @property
    def alpha_sq(self) -> Fraction:
        return Fraction(self.k * self.k, 4 * self.n)


def _check_inputs(d, k, n):
    d = ratvec(d)
    if len(d) != n:
        raise DimensionMismatch(f"d has length {len(d)}, expected {n}")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if norm_sq(d) > 1:
        raise NormTooLarge("need |d| <= 1")
    return d


def sample_sparsifier(d: Sequence, k: int, n: int, seed: int, draw: int = 0) -> SparsifierSample:
    """One draw of the sparsifier for d (``draw`` selects an independent stream)."""
    d = _check_inputs(d, k, n)
    plan = _plan(d, k, n, Fraction(1))
    U = uint64s(derive_rng(seed, "sparsifier", n, k, draw), n)
    inv_alpha = QuadRat.sqrt(n, Fraction(2, k))
    vals = []
    for di, (det, T), u in zip(d, plan, U):
        if det:
            vals.append(QuadRat(di))
        elif int(u) <= T:
            vals.append(inv_alpha * sign(di))
        else:
            vals.append(QuadRat(0))
    supp = sum(1 for v in vals if v.signum() != 0)
    return SparsifierSample(d, k, n, tuple(vals), supp, tuple(p[0] for p in plan))


@dataclass
class ProbeStats:
    probe: RatVec
    expected: Fraction          # d . a
    mean: float
    sigma: float                # exact standard deviation of the estimator of the mean
    var_emp: float
    var_exact: QuadRat
    var_bound: QuadRat          # (1/alpha) sum a_i^2 |d_i|
    envelope_ok: bool

    @property
    def mean_ok(self) -> bool:
        return abs(self.mean - float(self.expected)) <= 3 * self.sigma + 1e-12

    @property
    def var_ok(self) -> bool:
        return self.var_exact <= self.var_bound


@dataclass
class SparsifierStats:
    d: RatVec
    k: int
    n: int
    trials: int
    probes: List[ProbeStats]
    support_exceed_freq: float
    support_claim: float        # 1 / 4n
    support_sigma: float
    in_regime: bool             # k >= 8 log 4tn

    @property
    def sparsity_ok(self) -> bool:
        return self.support_exceed_freq <= self.support_claim + 3 * self.support_sigma


def _envelope_ok(d, a, k, n, plan, seen) -> bool:
    """Exact check of |D_i a_i - d_i a_i| <= |a_i| / alpha for every realized value class."""
    inv_alpha = QuadRat.sqrt(n, Fraction(2, k))
    for i, (det, _) in enumerate(plan):
        classes = [QuadRat(d[i])] if det else [
            v for v, hit in ((inv_alpha * sign(d[i]), seen[i][1]), (QuadRat(0), seen[i][0])) if hit]
        for v in classes:
            if abs(v * a[i] - d[i] * a[i]) > inv_alpha * abs(a[i]):
                return False
    return True


def verify_sparsifier_stats(d: Sequence, k: int, n: int, probes: Sequence[Sequence],
                            trials: int, seed: int, t: int = 1, chunk: int = 20000) -> SparsifierStats:
    """Monte Carlo check of mean, variance and sparsity of the sparsifier."""
    d = _check_inputs(d, k, n)
    if trials < 1000:
        raise ValueError("trials must be at least 1000")
    probes = [ratvec(a) for a in probes]
    for a in probes:
        if len(a) != n:
            raise DimensionMismatch("probe length differs from n")
    plan = _plan(d, k, n, Fraction(1))
    inv_alpha_f = 2 * math.sqrt(n) / k
    rand_idx = [i for i, (det, _) in enumerate(plan) if not det]
    thresholds = np.array([plan[i][1] for i in rand_idx], dtype=np.uint64)
    fixed_vals = np.array([float(d[i]) if plan[i][0] else 0.0 for i in range(n)])
    signs = np.array([sign(d[i]) for i in rand_idx], dtype=float)
    det_support = sum(1 for i, (det, _) in enumerate(plan) if det and d[i] != 0)
    A = np.array([[float(x) for x in a] for a in probes]) if probes else np.zeros((0, n))

    rng = derive_rng(seed, "sparsifier-stats", n, k)
    sums = np.zeros(len(probes))
    sq = np.zeros(len(probes))
    exceed = 0
    seen = [[False, False] for _ in range(n)]
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        D = np.tile(fixed_vals, (m, 1))
        if rand_idx:
            U = uint64s(rng, (m, len(rand_idx)))
            hit = U <= thresholds[None, :]
            D[:, rand_idx] = hit * (signs * inv_alpha_f)[None, :]
            supp = hit.sum(axis=1) + det_support
            for col, i in enumerate(rand_idx):
                seen[i][1] |= bool(hit[:, col].any())
                seen[i][0] |= bool((~hit[:, col]).any())
        else:
            supp = np.full(m, det_support)
        exceed += int((supp > k).sum())
        vals = D @ A.T
        sums += vals.sum(axis=0)
        sq += (vals * vals).sum(axis=0)
        done += m

    stats = []
    inv_alpha = QuadRat.sqrt(n, Fraction(2, k))
    for j, a in enumerate(probes):
        mean = sums[j] / trials
        var_emp = max(0.0, sq[j] / trials - mean * mean)
        var_exact = QuadRat(0)
        bound = QuadRat(0)
        for i in range(n):
            bound = bound + inv_alpha * (a[i] * a[i] * abs(d[i]))
            if not plan[i][0]:
                # value sign/alpha w.p. alpha|d_i|: variance a_i^2 (|d_i|/alpha - d_i^2)
                var_exact = var_exact + (inv_alpha * abs(d[i]) - d[i] * d[i]) * (a[i] * a[i])
        sigma = math.sqrt(float(var_exact) / trials)
        stats.append(ProbeStats(a, dot(d, a), float(mean), sigma, var_emp, var_exact, bound,
                                _envelope_ok(d, a, k, n, plan, seen)))
    claim = 1 / (4 * n)
    return SparsifierStats(d, k, n, trials, stats, exceed / trials, claim,
                           math.sqrt(claim * (1 - claim) / trials),
                           k >= 8 * math.log(4 * t * n))


@dataclass
class SparseCut:
    a: Tuple[int, ...]          # primitive integer coefficients
    b: int
    support: Tuple[int, ...]
    tries: int
    method: str                 # "direct" or "sampled"
    violation: Fraction         # a.u - b > 0
    lemma_conditions: bool = True


def _round_coeffs(coeffs: Sequence[QuadRat], digits: int) -> List[Fraction]:
    scale = 10 ** digits
    out = []
    for c in coeffs:
        if c.q == 0:
            out.append(c.p)
        else:
            x = c.q * c.q * c.s * scale * scale
            root = Fraction(math.isqrt(x.numerator // x.denominator), scale)
            out.append(c.p + (root if c.q > 0 else -root))
    return out


def _cut_from(coeffs: Sequence[QuadRat], P: VRep, u: RatVec):
    """Round coefficients to rationals on the same support and tighten to max over P.

    Returns primitive integer ``(a, b)`` when the rounded cut still cuts u off.
    """
    for digits in (30, 60, 120):
        a = _round_coeffs(coeffs, digits)
        rhs = max(dot(a, v) for v in P.vertices)
        if dot(a, u) > rhs:
            ints = to_primitive_ints(tuple(a) + (rhs,))
            return ints[:-1], ints[-1]
    return None


def find_sparse_separator(P: VRep, u: Sequence, k: int, max_tries: Optional[int] = None,
                          seed: int = 0, strict: bool = False) -> SparseCut:
    """A valid k-sparse inequality for P violated by u.

    With v the projection of u onto P and lam = |u - v|, sparsified copies
    e of d = (u - v)/lam are drawn.  A k-sparse draw is accepted when

    * every vertex p has ``e p <= e v + lam/2`` and ``e u > e v + lam/2``
      (tested exactly after multiplying through by lam), or
    * unless ``strict``, the tightened cut ``e x <= max_P e x`` still cuts u.

    The returned cut always uses the tightened right-hand side, so it is
    valid for P by construction; ``lemma_conditions`` says which test passed.
    When d itself is k-sparse it is returned directly.
    """
    u = ratvec(u)
    n = P.dim
    if len(u) != n:
        raise DimensionMismatch("u does not match the dimension of P")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    v, D = nearest_point(u, P)
    if D == 0:
        raise ValueError("u lies in P; nothing to separate")
    w = tuple(a - b for a, b in zip(u, v))
    supp_w = [i for i, x in enumerate(w) if x != 0]
    if len(supp_w) <= k:
        rhs = dot(w, v)
        ints = to_primitive_ints(w + (rhs,))
        a, b = ints[:-1], ints[-1]
        return SparseCut(a, b, tuple(supp_w), 0, "direct", dot(a, u) - b)
    if max_tries is None:
        max_tries = 64 * n
    plan = _plan(w, k, n, D)
    # lam * (1/alpha) = 2 sqrt(n D) / k
    big = QuadRat.sqrt(n * D, Fraction(2, k))
    half = D / 2
    diffs = [tuple(a - b for a, b in zip(p, v)) for p in P.vertices]
    best = None
    for attempt in range(max_tries):
        U = uint64s(derive_rng(seed, "separator", n, k, attempt), n)
        e = []
        for wi, (det, T), x in zip(w, plan, U):
            if det:
                e.append(QuadRat(wi))
            elif int(x) <= T:
                e.append(big * sign(wi))
            else:
                e.append(QuadRat(0))
        supp = [i for i, c in enumerate(e) if c.signum() != 0]
        if not supp or len(supp) > k:
            continue

        def ev(vec):
            acc = QuadRat(0)
            for i in supp:
                if vec[i] != 0:
                    acc = acc + e[i] * vec[i]
            return acc

        cut_side = ev(w) - half
        worst = max((ev(p) for p in diffs), key=float)
        margin = min(float(cut_side), float(half - worst))
        if best is None or margin > best:
            best = margin
        lemma_ok = cut_side.signum() > 0 and all((ev(p) - half).signum() <= 0 for p in diffs)
        if strict and not lemma_ok:
            continue
        got = _cut_from(e, P, u)
        if got is None:
            continue
        a, b = got
        return SparseCut(a, b, tuple(i for i, x in enumerate(a) if x != 0), attempt + 1,
                         "sampled", dot(a, u) - b, lemma_ok)
    raise NotSeparated(f"no separating k-sparse sample in {max_tries} tries", best)


@dataclass
class AveragedCut:
    a: RatVec
    rhs: Fraction
    n: int
    k: int
    box: Tuple[RatVec, RatVec]
    base_rhs: Fraction

    def member(self, I: Sequence[int]) -> Tuple[RatVec, Fraction]:
        """The cut ``sum_{i in I} a_i x_i <= b + max over the box of -sum_{i not in I} a_i x_i``."""
        I = set(I)
        if len(I) != self.k:
            raise ValueError("member support must have size k")
        lo, hi = self.box
        coef = tuple(x if i in I else Fraction(0) for i, x in enumerate(self.a))
        extra = sum((-min(self.a[i] * lo[i], self.a[i] * hi[i])
                     for i in range(self.n) if i not in I), Fraction(0))
        return coef, self.base_rhs + extra


def averaged_sparse_cut(a: Sequence, b, n: int, k: int, box=None) -> AveragedCut:
    """Average of the k-sparse relaxations of ``a x <= b`` over all supports.

    On the box [-1, 1]^n this is ``a x <= b + (n/k - 1)(b + |a|_1)``.
    """
    a, b = ratvec(a), rat(b)
    if len(a) != n:
        raise DimensionMismatch("a has the wrong length")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if box is None:
        box = ((Fraction(-1),) * n, (Fraction(1),) * n)
    lo, hi = ratvec(box[0]), ratvec(box[1])
    lo_val = sum((min(x * l, x * h) for x, l, h in zip(a, lo, hi)), Fraction(0))
    hi_val = sum((max(x * l, x * h) for x, l, h in zip(a, lo, hi)), Fraction(0))
    if lo_val > b:
        raise DegenerateBox("halfspace misses the box")
    if hi_val <= b:
        raise DegenerateBox("halfspace contains the whole box")
    c = sum((-min(x * l, x * h) for x, l, h in zip(a, lo, hi)), Fraction(0))
    rhs = Fraction(n, k) * (b + (1 - Fraction(k, n)) * c)
    return AveragedCut(a, rhs, n, k, (lo, hi), b)
