"""The k-sparse closure of a polytope and audits of its facets.

Coordinates are 0-based throughout.  The closure is assembled as the
intersection over supports I of ``P + R^{complement of I}``, whose
inequality description is obtained by projecting the vertices onto I and
convexifying there.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, DimensionMismatch, Infeasible, NegativeCoefficient
from .exact import RatVec, rat, ratvec, to_primitive_ints
from .kernel.dd import reduce_hrep, v_to_h
from .kernel.fm import remove_redundant_lp
from .kernel.reps import HRep, VRep
from .rng import derive_rng

DEFAULT_SUPPORT_BUDGET = 10 ** 6

Box = Tuple[RatVec, RatVec]


@dataclass(frozen=True, order=True)
class SupportSet:
    indices: Tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        if len(idx) != len(self.indices):
            raise ValueError(f"repeated index in support {self.indices}")
        if not idx:
            raise ValueError("support must be nonempty")
        if idx[0] < 0:
            raise ValueError("support indices are 0-based and nonnegative")
        object.__setattr__(self, "indices", idx)

    @property
    def k(self) -> int:
        return len(self.indices)

    def complement(self, n: int) -> Tuple[int, ...]:
        return tuple(i for i in range(n) if i not in self.indices)


def _support(I, n: int) -> SupportSet:
    S = I if isinstance(I, SupportSet) else SupportSet(tuple(I))
    if S.indices[-1] >= n:
        raise DimensionMismatch(f"support {S.indices} exceeds dimension {n}")
    return S


def _row_key(a, b) -> Tuple[int, ...]:
    return to_primitive_ints(tuple(a) + (b,))


@dataclass
class ClosureResult:
    closure: HRep
    provenance: Dict[Tuple[int, ...], SupportSet]
    k: int
    box: Box
    outer_approx: bool = False
    vertices: Optional[VRep] = field(default=None, repr=False)
    supports_used: int = 0

    def support_of(self, a, b) -> SupportSet:
        """Support set that produced the (primitive-scaled) row ``a x <= b``."""
        return self.provenance[_row_key(a, b)]


def free_term(P: VRep, I) -> HRep:
    """Inequality description of ``P + R^{Ibar}``: project onto I, convexify, lift."""
    if not P.bounded:
        raise ValueError("free_term needs a bounded P")
    n = P.dim
    S = _support(I, n)
    idx = S.indices
    local = VRep(len(idx), tuple(tuple(v[i] for i in idx) for v in P.vertices))
    H = v_to_h(local)

    def lift(a):
        full = [Fraction(0)] * n
        for i, x in zip(idx, a):
            full[i] = Fraction(x)
        return tuple(full)

    return HRep(n, tuple((lift(a), b) for a, b in H.inequalities),
                tuple((lift(a), b) for a, b in H.equations))


def _check_box(P: VRep, box) -> Box:
    lo, hi = ratvec(box[0]), ratvec(box[1])
    if len(lo) != P.dim or len(hi) != P.dim:
        raise DimensionMismatch("box does not match the dimension of P")
    for v in P.vertices:
        if any(x < l or x > h for x, l, h in zip(v, lo, hi)):
            raise ValueError(f"vertex {v} lies outside the box")
    return lo, hi


def _box_rows(lo, hi):
    n = len(lo)
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((tuple(e), hi[i]))
        e = [0] * n
        e[i] = -1
        rows.append((tuple(e), -lo[i]))
    return rows


REDUCE_MODES = ("dd", "lp", "none")


def _assemble(P: VRep, k: int, box: Box, terms, outer: bool, reduce: str = "dd") -> ClosureResult:
    """Intersect per-support terms with the box, keep provenance, drop redundancy.

    ``reduce`` picks the redundancy removal: "dd" (exact, also yields the
    vertices), "lp" (one exact LP per row, no vertices) or "none" (dedup only).
    """
    if reduce not in REDUCE_MODES:
        raise ValueError(f"reduce must be one of {REDUCE_MODES}, got {reduce!r}")
    n = P.dim
    prov: Dict[Tuple[int, ...], SupportSet] = {}
    ineqs, eqs = [], []
    for S, H in terms:
        for a, b in H.inequalities:
            key = _row_key(a, b)
            if key not in prov:
                prov[key] = S
                ineqs.append((key[:n], key[n]))
        for a, b in H.equations:
            key = _row_key(a, b)
            neg = tuple(-x for x in key)
            if key not in prov:
                prov[key] = S
                prov.setdefault(neg, S)
                eqs.append((key[:n], key[n]))
    for a, b in _box_rows(*box):
        key = _row_key(a, b)
        if key not in prov:
            prov[key] = SupportSet(tuple(i for i, x in enumerate(a) if x != 0))
            ineqs.append((key[:n], key[n]))
    if reduce == "dd":
        reduced, V = reduce_hrep(HRep(n, tuple(ineqs), tuple(eqs)))
    elif reduce == "lp":
        rows = remove_redundant_lp([a + (b,) for a, b in ineqs], [a + (b,) for a, b in eqs], n)
        reduced, V = HRep(n, tuple((r[:n], r[n]) for r in rows), tuple(eqs)), None
    else:
        reduced, V = HRep(n, tuple(ineqs), tuple(eqs)), None
    # rows promoted to equations by reduce_hrep keep their provenance
    for a, b in reduced.equations:
        key = _row_key(a, b)
        neg = tuple(-x for x in key)
        if key not in prov and neg in prov:
            prov[key] = prov[neg]
    kept = {_row_key(a, b) for a, b in reduced.inequalities + reduced.equations}
    prov = {key: S for key, S in prov.items() if key in kept}
    return ClosureResult(reduced, prov, k, box, outer, V, len(terms))


def _check_k(k: int, n: int):
    if not isinstance(k, int) or k < 1 or k > n:
        raise ValueError(f"k must satisfy 1 <= k <= n = {n}, got {k}")


def sparse_closure(P: VRep, k: int, box, budget: int = DEFAULT_SUPPORT_BUDGET,
                   reduce: str = "dd") -> ClosureResult:
    """Exact k-sparse closure of P intersected with ``box`` (supports in lexicographic order)."""
    n = P.dim
    _check_k(k, n)
    box = _check_box(P, box)
    count = math.comb(n, k)
    if count > budget:
        raise BudgetExceeded(f"C({n},{k}) = {count} supports exceeds budget {budget}")
    terms = [(SupportSet(I), free_term(P, I)) for I in itertools.combinations(range(n), k)]
    return _assemble(P, k, box, terms, outer=False, reduce=reduce)


def unrank_combination(rank: int, n: int, k: int) -> Tuple[int, ...]:
    """The ``rank``-th k-subset of range(n) in lexicographic order."""
    out = []
    x = 0
    for remaining in range(k, 0, -1):
        while True:
            c = math.comb(n - x - 1, remaining - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def sampled_closure(P: VRep, k: int, box, num_supports: int, seed: int,
                    supports: Optional[Iterable[Sequence[int]]] = None,
                    reduce: str = "dd") -> ClosureResult:
    """Intersection over a seeded uniform sample of supports (an outer approximation of P^k).

    Supports are drawn without replacement; asking for all of them gives the
    exact closure.  ``supports`` bypasses sampling with an explicit list.
    """
    n = P.dim
    _check_k(k, n)
    box = _check_box(P, box)
    if supports is not None:
        chosen = sorted({_support(I, n) for I in supports})
        if any(S.k != k for S in chosen):
            raise ValueError("every explicit support must have size k")
    else:
        if num_supports < 1:
            raise ValueError("num_supports must be at least 1")
        total = math.comb(n, k)
        if num_supports >= total:
            ranks = range(total)
        else:
            rng = derive_rng(seed, "sampled_closure", n, k)
            ranks = sorted(int(r) for r in rng.choice(total, size=num_supports, replace=False))
        chosen = [SupportSet(unrank_combination(r, n, k)) for r in ranks]
    terms = [(S, free_term(P, S)) for S in chosen]
    exact = len(chosen) == math.comb(n, k)
    return _assemble(P, k, box, terms, outer=not exact, reduce=reduce)


def monotone_halfspace_closure(a: Sequence, b, k: int, box=None) -> ClosureResult:
    """Closure of ``{a x <= b} ∩ box`` for ``a >= 0`` straight from the formula.

    For each support I the only new row is ``a^I x <= b - sum_{j not in I} a_j lo_j``.
    """
    a, b = ratvec(a), rat(b)
    n = len(a)
    if box is None:
        box = ((Fraction(0),) * n, (Fraction(1),) * n)
    lo, hi = ratvec(box[0]), ratvec(box[1])
    if any(x < 0 for x in a):
        raise NegativeCoefficient("monotone closure needs a >= 0")
    _check_k(k, n)
    if sum((x * l for x, l in zip(a, lo)), Fraction(0)) > b:
        raise Infeasible("halfspace misses the box")
    rows = []
    for I in itertools.combinations(range(n), k):
        aI = tuple(a[i] if i in I else Fraction(0) for i in range(n))
        rhs = b - sum((a[j] * lo[j] for j in range(n) if j not in I), Fraction(0))
        rows.append((SupportSet(I), HRep(n, ((aI, rhs),))))
    dummy = VRep(n, (lo,))
    return _assemble(dummy, k, (lo, hi), rows, outer=False)


@dataclass
class FacetAudit:
    k: int
    max_sparsity: int
    max_inf_norm: int
    bound_sq: int  # k^k, the square of k^{k/2}
    violations: List[Tuple[Tuple[int, ...], str]]

    @property
    def ok(self) -> bool:
        return not self.violations


def facet_normal_audit(C: ClosureResult) -> FacetAudit:
    """Check sparsity <= k and infinity norm <= k^{k/2} for every primitive facet normal."""
    n = C.closure.dim
    k = C.k
    bound_sq = k ** k
    violations = []
    max_sp = max_inf = 0
    for a, b in C.closure.inequalities + C.closure.equations:
        key = _row_key(a, b)
        normal = key[:n]
        sp = sum(1 for x in normal if x != 0)
        inf = max(abs(x) for x in normal)
        max_sp, max_inf = max(max_sp, sp), max(max_inf, inf)
        if sp > k:
            violations.append((key, f"support {sp} > k={k}"))
        if inf * inf > bound_sq:
            violations.append((key, f"inf-norm {inf} > k^(k/2)"))
    return FacetAudit(k, max_sp, max_inf, bound_sq, violations)
