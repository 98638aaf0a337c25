"""Projection of H-polyhedra onto a coordinate subset by Fourier-Motzkin elimination."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Tuple

from ..errors import DimensionMismatch, Infeasible
from ..exact import to_primitive_ints
from .dd import reduce_hrep
from .linalg import rref
from .reps import HRep

IntRow = Tuple[int, ...]  # coefficients followed by the right-hand side


def _norm(row: Iterable[Fraction]) -> IntRow:
    return to_primitive_ints(tuple(row))


def remove_redundant_lp(rows: List[IntRow], eqs: List[IntRow], dim: int) -> List[IntRow]:
    """Drop every inequality implied by the others (one exact LP per row)."""
    from ..lp import maximize

    kept = sorted(set(rows), key=lambda r: (sum(1 for x in r[:dim] if x != 0), r))
    eq_part = tuple((r[:dim], r[dim]) for r in eqs)
    # densest rows are tested first so sparse ones tend to survive
    for r in sorted(kept, key=lambda r: (-sum(1 for x in r[:dim] if x != 0), r)):
        others = [s for s in kept if s != r]
        H = HRep(dim, tuple((s[:dim], s[dim]) for s in others), eq_part)
        res = maximize(r[:dim], H)
        if res.optimal and res.value <= r[dim]:
            kept = others
    return kept


def _feasible(rows, eqs, dim) -> bool:
    from ..lp import maximize

    H = HRep(dim, tuple((r[:dim], r[dim]) for r in rows), tuple((r[:dim], r[dim]) for r in eqs))
    return H.infeasible is False and maximize([0] * dim, H).optimal


def _fm_step(rows: List[IntRow], j: int) -> List[IntRow]:
    pos = [r for r in rows if r[j] > 0]
    neg = [r for r in rows if r[j] < 0]
    out = [r for r in rows if r[j] == 0]
    for p in pos:
        for q in neg:
            s, t = -q[j], p[j]
            comb = tuple(s * a + t * b for a, b in zip(p, q))
            if any(x != 0 for x in comb[:-1]):
                out.append(_norm(comb))
            elif comb[-1] < 0:
                raise Infeasible("elimination produced 0 <= negative")
    return sorted(set(out))


def project(H: HRep, keep: Iterable[int]) -> HRep:
    """Exact projection of H onto the coordinates in ``keep`` (kept in sorted order).

    Equations are used first to substitute eliminated variables away; the rest
    are removed one at a time by Fourier-Motzkin, picking the variable with the
    fewest generated rows and pruning redundant rows by LP after each step.
    The result is made irredundant at the end.
    """
    keep = sorted(set(keep))
    d = H.dim
    if any(i < 0 or i >= d for i in keep):
        raise DimensionMismatch(f"keep {keep} not inside range({d})")
    if not keep:
        raise ValueError("keep must be nonempty")
    out_dim = len(keep)
    if H.infeasible:
        return HRep(out_dim, (), (), infeasible=True)
    elim = [i for i in range(d) if i not in keep]
    # column order: eliminated variables first so equations pivot on them
    order = elim + keep

    def permute(a, b):
        return [Fraction(a[i]) for i in order] + [Fraction(b)]

    ineqs = [_norm(permute(a, b)) for a, b in H.inequalities]
    eqs: List[IntRow] = []
    if H.equations:
        red, piv = rref([permute(a, b) for a, b in H.equations], d)
        if len(red) > len(piv):
            return HRep(out_dim, (), (), infeasible=True)
        for row, p in zip(red, piv):
            if p < len(elim):
                # substitute x_p = row[-1] - sum of the other terms
                new = []
                for r in ineqs:
                    c = r[p]
                    if c == 0:
                        new.append(r)
                        continue
                    comb = [Fraction(x) - c * y for x, y in zip(r, row)]
                    if any(x != 0 for x in comb[:-1]):
                        new.append(_norm(comb))
                    elif comb[-1] < 0:
                        return HRep(out_dim, (), (), infeasible=True)
                ineqs = new
                # other equations are already reduced on column p
            else:
                eqs.append(_norm(row))
        done = {p for p in piv if p < len(elim)}
    else:
        done = set()

    rows = sorted(set(ineqs))
    todo = [j for j in range(len(elim)) if j not in done]
    try:
        while todo:
            counts = []
            for j in todo:
                np_ = sum(1 for r in rows if r[j] > 0)
                nn = sum(1 for r in rows if r[j] < 0)
                counts.append((np_ * nn - np_ - nn, j))
            _, j = min(counts)
            todo.remove(j)
            rows = _fm_step(rows, j)
            if len(rows) > 2 * d:
                rows = remove_redundant_lp(rows, eqs, d)
    except Infeasible:
        return HRep(out_dim, (), (), infeasible=True)
    if not _feasible(rows, eqs, d):
        return HRep(out_dim, (), (), infeasible=True)

    off = len(elim)
    P = HRep(out_dim,
             tuple((r[off:d], r[d]) for r in rows),
             tuple((r[off:d], r[d]) for r in eqs))
    return reduce_hrep(P)[0]
