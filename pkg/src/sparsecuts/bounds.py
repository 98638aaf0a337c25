"""Closed-form upper and lower bounds on dist(P, P^k) and the phase of k (binary64).

All logarithms are natural.  Formulas evaluated outside the regime where
they are proved still return a value; the violated hypotheses are listed in
``flags`` and a :class:`RegimeWarning` is emitted.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple


class RegimeWarning(UserWarning):
    """A bound was evaluated outside the hypotheses it is proved under."""


class Phase(enum.Enum):
    SMALL = "Small"
    MEDIUM = "Medium"
    LARGE = "Large"


def _warn(flags: List[str], quiet: bool):
    if flags and not quiet:
        warnings.warn("; ".join(flags), RegimeWarning, stacklevel=3)


def ub_theorem1(n: int, t: int, k: int, max_vertex_norm: float) -> Tuple[float, float, float]:
    """(ub1, ub1_simplified, ub2): the two general upper bounds and the weaker closed form of the first."""
    if n < 2 or not 1 <= k <= n or t < 1:
        raise ValueError("need n >= 2, 1 <= k <= n, t >= 1")
    L = math.log(4 * t * n)
    first = n ** 0.25 / math.sqrt(k) * math.sqrt(8 * max_vertex_norm) * math.sqrt(L)
    second = 8 * math.sqrt(n) / (3 * k) * L
    ub1 = 4 * max(first, second)
    ub1_simplified = 8 * math.sqrt(2) * math.sqrt(n / k) * math.sqrt(L)
    ub2 = 2 * math.sqrt(n) * (n / k - 1)
    return ub1, ub1_simplified, ub2


def lb_theorem2_flags(n: int, t: int, k: int) -> List[str]:
    flags = []
    if not 64 <= k <= n:
        flags.append("needs 64 <= k <= n")
    lo = (0.5 * k * k * math.log(n) + 2 * k + 1) ** 2
    if t < lo:
        flags.append("needs t >= (k^2 log n / 2 + 2k + 1)^2")
    if math.log(t) > n:
        flags.append("needs t <= e^n")
    return flags


def lb_theorem2(n: int, t: int, k: int, quiet: bool = False) -> float:
    """Lower bound for the convex hull of t random 0/1 points (holds w.p. >= 1/4 in regime)."""
    if n < 2 or t < 1 or k < 1:
        raise ValueError("need n >= 2, t >= 1, k >= 1")
    _warn(lb_theorem2_flags(n, t, k), quiet)
    lt = math.log(t)
    head = min(math.sqrt(n) / math.sqrt(k) * math.sqrt(lt) / (110 * math.sqrt(math.log(n))),
               math.sqrt(n) / 8)
    return head * (0.5 - k ** -1.5) - 3 * math.sqrt(lt)


def lb_theorem3_flags(n: int, m: int) -> List[str]:
    flags = []
    if n < 50:
        flags.append("needs n >= 50")
    if not 8 * math.log(8 * n) <= m <= n:
        flags.append("needs 8 log 8n <= m <= n")
    return flags


def lb_theorem3(n: int, m: int, M: int, k: int, quiet: bool = False) -> Tuple[float, float, float, float]:
    """(value, alpha, eps, eps_prime) of the random-packing-IP lower bound, with c = k/n."""
    if n < 1 or m < 1 or M < 1 or not 1 <= k <= n:
        raise ValueError("need n, m, M >= 1 and 1 <= k <= n")
    _warn(lb_theorem3_flags(n, m), quiet)
    c = k / n
    num = n - 2 * math.sqrt(n * math.log(8 * m))
    den = c * ((2 - c) * n + 1) + 2 * math.sqrt(10 * c * n * m)
    inv_alpha = M / (2 * (M + 1)) * num / den
    alpha = 1 / inv_alpha if inv_alpha != 0 else math.inf
    eps = 24 * math.sqrt(math.log(4 * n * n * m)) / math.sqrt(n)
    gap = math.sqrt(m) - 2 * math.sqrt(math.log(8 * n))
    eps_prime = 3 * math.sqrt(math.log(8 * n)) / gap if gap != 0 else math.inf
    # a negative alpha (numerator below zero) still gives max{alpha, 1} = 1
    value = math.sqrt(n) / 2 * (2 * (1 - eps) ** 2 / max(alpha, 1) - (1 + eps_prime))
    return value, alpha, eps, eps_prime


def phase_thresholds(n: int, t: int) -> Tuple[float, float]:
    L = math.log(4 * t * n)
    return 128 * L, n - math.sqrt(n * L)


def phase_classify(n: int, t: int, k: int) -> Phase:
    """Small below 128 log 4tn, Large from n - sqrt(n log 4tn) on, Medium between.

    Boundary points go to the later phase.  When the two thresholds cross
    (every desk-scale n) the Large test wins, so k = n is always Large.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    small_end, large_start = phase_thresholds(n, t)
    if k >= large_start:
        return Phase.LARGE
    if k >= small_end:
        return Phase.MEDIUM
    return Phase.SMALL


@dataclass
class BoundReport:
    n: int
    t: int
    k: int
    ub1: float
    ub1_simplified: float
    ub2: float
    lb_random01: float
    phase: Phase
    m: Optional[int] = None
    M: Optional[int] = None
    c: float = 0.0
    lb_pip: Optional[float] = None
    alpha: Optional[float] = None
    eps: Optional[float] = None
    eps_prime: Optional[float] = None
    flags: List[str] = field(default_factory=list)

    @property
    def ub(self) -> float:
        return min(self.ub1, self.ub2)


def bound_report(n: int, t: int, k: int, max_vertex_norm: Optional[float] = None,
                 m: Optional[int] = None, M: Optional[int] = None) -> BoundReport:
    """Every formula at once; vertex norm defaults to its worst case sqrt(n)."""
    if max_vertex_norm is None:
        max_vertex_norm = math.sqrt(n)
    ub1, ub1s, ub2 = ub_theorem1(n, t, k, max_vertex_norm)
    flags = ["random01: " + f for f in lb_theorem2_flags(n, t, k)]
    lb2 = lb_theorem2(n, t, k, quiet=True)
    rep = BoundReport(n, t, k, ub1, ub1s, ub2, lb2, phase_classify(n, t, k), m=m, M=M, c=k / n)
    if m is not None and M is not None:
        rep.lb_pip, rep.alpha, rep.eps, rep.eps_prime = lb_theorem3(n, m, M, k, quiet=True)
        flags += ["pip: " + f for f in lb_theorem3_flags(n, m)]
    rep.flags = flags
    return rep
