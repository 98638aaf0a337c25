"""Monte Carlo and exact validators for the probabilistic lemmas.

Desk-scale instances violate the asymptotic hypotheses (n >= 50, k >= 64,
m >= 8 log 8n); every report lists the violated hypotheses in ``flags``
and the caller decides what to assert.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..bounds import lb_theorem3
from ..closure import sparse_closure
from ..errors import BudgetExceeded
from ..exact import QuadRat, rat, to_primitive_ints
from ..instances import PIP_MAX_N, PipInstance
from ..kernel.reps import VRep
from ..lp import member_vrep
from ..rng import derive_rng


def anticoncentration_bound(alpha: float, n: int) -> float:
    """(e^{-50 a^2} - e^{-100 a^2})^{60 log n}."""
    base = math.exp(-50 * alpha * alpha) - math.exp(-100 * alpha * alpha)
    return base ** (60 * math.log(n)) if base > 0 else 0.0


@dataclass
class AnticoncentrationReport:
    n: int
    alpha: float
    trials: int
    p_bernoulli: float
    p_rademacher: float
    bound: float
    sigma: float
    flags: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        lo = self.bound - 3 * self.sigma
        return self.p_bernoulli >= lo and self.p_rademacher >= lo


def anticoncentration_mc(a: Sequence[float], alpha: float, trials: int, seed: int,
                         chunk: int = 100_000) -> AnticoncentrationReport:
    """Estimate both tail probabilities of the anticoncentration lemma.

    Bernoulli form: Pr(aZ >= E[aZ] + alpha/(2 sqrt n) (1 - 1/n^2)|a|_1 - 1/(2n^2)).
    Rademacher form: Pr(aX >= alpha/sqrt n (1 - 1/n^2)|a|_1 - 1/n^2), with an
    independent stream.
    """
    a = np.asarray([float(x) for x in a])
    n = len(a)
    if np.any(np.abs(a) > 1):
        raise ValueError("a must lie in [-1, 1]^n")
    flags = []
    if not 0 <= alpha <= math.sqrt(n) / 8:
        flags.append("alpha outside [0, sqrt(n)/8]")
    if trials < 10_000:
        flags.append("fewer than 10^4 trials")
    l1 = float(np.abs(a).sum())
    shrink = 1 - 1 / n ** 2
    thr_b = a.sum() / 2 + alpha / (2 * math.sqrt(n)) * shrink * l1 - 1 / (2 * n * n)
    thr_r = alpha / math.sqrt(n) * shrink * l1 - 1 / (n * n)
    rb = derive_rng(seed, "anticonc-bernoulli", n)
    rr = derive_rng(seed, "anticonc-rademacher", n)
    hits_b = hits_r = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        Z = rb.integers(0, 2, size=(m, n), dtype=np.int8)
        hits_b += int(((Z @ a) >= thr_b).sum())
        X = 2 * rr.integers(0, 2, size=(m, n), dtype=np.int8) - 1
        hits_r += int(((X @ a) >= thr_r).sum())
        done += m
    pb, pr = hits_b / trials, hits_r / trials
    bound = anticoncentration_bound(alpha, n)
    p = max(min(pb, pr), bound)
    sigma = math.sqrt(max(p * (1 - p), 1 / trials) / trials)
    return AnticoncentrationReport(n, alpha, trials, pb, pr, bound, sigma, flags)


@dataclass
class FacetToughness:
    normal: Tuple[int, ...]
    rhs: int
    alpha_max: Optional[QuadRat]   # None means every alpha passes
    passes: Optional[bool]         # at the requested alpha


@dataclass
class ToughnessReport:
    k: int
    alpha: Optional[Fraction]
    facets: List[FacetToughness]
    max_alpha: Optional[QuadRat]   # None means unbounded

    @property
    def tough(self) -> Optional[bool]:
        if self.alpha is None:
            return None
        return all(f.passes for f in self.facets)


def toughness_audit(P: VRep, k: int, alpha=None, box=None) -> ToughnessReport:
    """Check every facet d x <= d0 of P^k against the alpha-toughness slack condition.

    The condition is linear in alpha, so the largest admissible alpha is
    found in closed form: ``alpha_max = s * 2 sqrt(k) / ((1 - 1/k^2) |d|_1)``
    with ``s = d0 - sum(d)/2 + |d|_inf / (2 k^2)``.
    """
    n = P.dim
    if box is None:
        box = ((0,) * n, (1,) * n)
    C = sparse_closure(P, k, box)
    alpha = rat(alpha) if alpha is not None else None
    rows = list(C.closure.inequalities)
    for a, b in C.closure.equations:
        rows.append((a, b))
        rows.append((tuple(-x for x in a), -b))
    shrink = 1 - Fraction(1, k * k)
    facets = []
    overall: Optional[QuadRat] = None
    for a, b in rows:
        ints = to_primitive_ints(tuple(a) + (b,))
        d, d0 = ints[:-1], ints[-1]
        l1 = sum(abs(x) for x in d)
        linf = max(abs(x) for x in d)
        slack = Fraction(d0) - Fraction(sum(d), 2) + Fraction(linf, 2 * k * k)
        coef = shrink * l1 / 2  # multiplies alpha / sqrt(k)
        if coef == 0:
            amax = None if slack >= 0 else QuadRat(-1)
        else:
            amax = QuadRat.sqrt(k, slack / coef)
        passes = None
        if alpha is not None:
            # slack >= alpha * coef / sqrt(k)  <=>  alpha <= amax
            passes = amax is None or QuadRat(alpha) <= amax
        facets.append(FacetToughness(d, d0, amax, passes))
        if amax is not None and (overall is None or amax < overall):
            overall = amax
    return ToughnessReport(k, alpha, facets, overall)


def _dec_sqrt_log(x) -> Decimal:
    return Decimal(x).ln().sqrt()


@dataclass
class PipChecks:
    n: int
    m: int
    M: int
    k: int
    cut_valid: bool
    max_weight: int
    rhs_concentration: List[bool]
    topk_bound_ok: List[bool]
    topk_bruteforce_agrees: Optional[bool]
    scale: float
    alpha: float
    eps: float
    scaled_point_member: Optional[bool]
    flags: List[str] = field(default_factory=list)


def aggregated_cut_valid(n: int, m: int, W: int) -> bool:
    """Check (a) given the max weight W of a feasible point: the cut's left side
    is maximised over the hull at a max-weight vertex when its coefficient is
    nonnegative, and at 0 otherwise."""
    with localcontext() as ctx:
        ctx.prec = 50
        sm = Decimal(m).sqrt()
        coef = 1 - 2 * _dec_sqrt_log(8 * n) / sm
        lhs = coef * W if coef > 0 else Decimal(0)
        rhs = Decimal(n) / 2 + (Decimal(n) * Decimal(8).ln()).sqrt() / sm
        return lhs <= rhs


def pip_lemma_checks(inst: PipInstance, k: int) -> PipChecks:
    """Per-instance checks (a), (b), (d), (e); see :func:`order_statistics_mc` for (c).

    (a) the aggregated cut ``(1 - 2 sqrt(log 8n)/sqrt m) sum x <= n/2 + sqrt(n log 8)/sqrt m``
        against the hull, with the integer max weight exact and the surds at 50 digits;
    (b) ``|sum_i A_ji - nM/2| <= M sqrt(n log 8m)`` per row;
    (d) ``A_j x <= (M+1) c (2n - cn + 1)/2 + (M+1) sqrt(10 c n m)`` for every x of weight cn;
    (e) membership of ``(1 - eps)^2 / max(alpha, 1) * x`` in the hull for the first weight-cn x;
        None when eps >= 1.
    """
    n, m, M = inst.n, inst.m, inst.M
    if n > PIP_MAX_N:
        raise BudgetExceeded("instance too large")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    flags = []
    if n < 50:
        flags.append("n < 50")
    if m < 8 * math.log(8 * n):
        flags.append("m < 8 log 8n")
    W = max(sum(v) for v in inst.feasible)
    cut_valid = aggregated_cut_valid(n, m, W)
    with localcontext() as ctx:
        ctx.prec = 50
        conc = []
        for row in inst.A:
            dev = abs(Decimal(sum(row)) - Decimal(n * M) / 2)
            conc.append(dev <= M * (Decimal(n) * Decimal(8 * m).ln()).sqrt())
        cn = k
        c = Decimal(k) / n
        lim = (M + 1) * c * (2 * n - cn + 1) / 2 + (M + 1) * (10 * c * n * m).sqrt()
        topk = [Decimal(sum(sorted(row, reverse=True)[:cn])) <= lim for row in inst.A]
    brute = None
    if math.comb(n, cn) <= 20_000:
        A = np.array(inst.A)
        best = np.full(m, -1)
        for S in itertools.combinations(range(n), cn):
            best = np.maximum(best, A[:, list(S)].sum(axis=1))
        brute = all(int(b) == sum(sorted(row, reverse=True)[:cn]) for b, row in zip(best, inst.A))
    _, alpha, eps, _ = lb_theorem3(n, m, max(M, 1), k, quiet=True)
    scale = (1 - eps) ** 2 / max(alpha, 1)
    if eps >= 1:
        flags.append("eps >= 1: scaling lemma vacuous")
    member = None
    # the scaling statement only says something when 0 < 1 - eps
    if eps < 1 and math.isfinite(scale):
        xbar = [Fraction(1) if i < cn else Fraction(0) for i in range(n)]
        s = Fraction(scale)
        member = member_vrep(inst.hull, [s * x for x in xbar])
    return PipChecks(n, m, M, k, bool(cut_valid), W, conc, topk, brute, scale, alpha, eps, member, flags)


@dataclass
class OrderStatReport:
    n: int
    trials: int
    means: List[float]
    expected: List[float]
    sigmas: List[float]

    @property
    def ok(self) -> bool:
        return all(abs(a - b) <= 3 * s for a, b, s in zip(self.means, self.expected, self.sigmas))


def order_statistics_mc(n: int, trials: int, seed: int) -> OrderStatReport:
    """Empirical E[U_(i)] for n uniforms against i/(n+1), with exact per-i standard errors."""
    rng = derive_rng(seed, "order-stats", n)
    U = np.sort(rng.random((trials, n)), axis=1)
    means = U.mean(axis=0).tolist()
    expected = [i / (n + 1) for i in range(1, n + 1)]
    sig = [math.sqrt(i * (n + 1 - i) / ((n + 1) ** 2 * (n + 2)) / trials) for i in range(1, n + 1)]
    return OrderStatReport(n, trials, means, expected, sig)


def cut_validity_frequency(n: int, m: int, M: int, seeds: Sequence[int]) -> Dict:
    """Fraction of seeds whose PIP hull satisfies the aggregated cut of check (a)."""
    from ..instances import pip_feasible_array

    hits = 0
    for s in seeds:
        _, _, X = pip_feasible_array(n, m, M, s)
        hits += aggregated_cut_valid(n, m, int(X.sum(axis=1).max()))
    return {"n": n, "m": m, "M": M, "seeds": len(seeds), "frequency": hits / len(seeds),
            "claimed_threshold": 0.75, "regime_mismatch": n < 50 or m < 8 * math.log(8 * n)}
