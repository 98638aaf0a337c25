"""Exact rational linear programming over H-representations.

``maximize(c, H)`` solves ``max c.x  s.t.  A x <= b, E x = f`` with x free.
Equations and lineality are removed first by exact elimination, leaving an
inequality system with full column rank.  Its dual ``min b.y, A^T y = c,
y >= 0`` is in standard form and is solved by a two-phase tableau simplex
with Bland's smallest-subscript rule; the primal optimum is read off as
the simplex multipliers.

:class:`WarmLP` keeps the optimal vertex basis around and re-optimizes for a
new objective with the primal (vertex-following) simplex, also under
Bland's rule.  This is what the shooting experiment uses.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .errors import DimensionMismatch
from .exact import RatVec, dot, from_mpq, ratvec, to_mpq
from .kernel.linalg import inverse, nullspace, rref, solve_affine
from .kernel.reps import HRep


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    value: Optional[Fraction] = None
    argmax: Optional[RatVec] = None
    # c = A^T y + E^T mu with y >= 0, and value = b.y + f.mu
    dual_ineq: Optional[Tuple[Fraction, ...]] = None
    dual_eq: Optional[Tuple[Fraction, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


# tableau arithmetic runs on gmpy2 rationals; results leave as Fractions
def _qdot(a, b) -> mpq:
    return sum((x * y for x, y in zip(a, b)), mpq(0))


_INFEASIBLE = LpResult(LpStatus.INFEASIBLE)
_UNBOUNDED = LpResult(LpStatus.UNBOUNDED)


class _Reduced:
    """The inequality part of H written in coordinates where it has full column rank."""

    def __init__(self, H: HRep):
        self.H = H
        d = H.dim
        self.eq_infeasible = H.infeasible
        sol = solve_affine([a for a, _ in H.equations], [b for _, b in H.equations], d)
        if sol is None:
            self.eq_infeasible = True
            return
        self.x0, self.N, _ = sol
        if H.equations:
            AN = [[dot(a, col) for col in self.N] for a, _ in H.inequalities]
            self.bz = [b - dot(a, self.x0) for a, b in H.inequalities]
        else:
            # N is the identity and x0 = 0
            AN = [list(a) for a, _ in H.inequalities]
            self.bz = [b for _, b in H.inequalities]
        nz = len(self.N)
        if AN:
            _, piv = rref(AN, nz)
        else:
            piv = []
        self.piv = piv
        self.K = nullspace(AN, nz) if AN else nullspace([], nz)
        self.Ar = [[row[j] for j in piv] for row in AN]

    def objective(self, c):
        cz = [dot(c, col) for col in self.N]
        free = any(dot(cz, k) != 0 for k in self.K)
        return [cz[j] for j in self.piv], dot(c, self.x0), free

    def lift(self, zr) -> RatVec:
        z = [Fraction(0)] * len(self.N)
        for j, v in zip(self.piv, zr):
            z[j] = v
        x = list(self.x0)
        for zj, col in zip(z, self.N):
            if zj != 0:
                x = [xi + zj * ci for xi, ci in zip(x, col)]
        return tuple(x)


def _pivot(T, rc, basis, r, c):
    pv = T[r][c]
    row = [v / pv for v in T[r]] if pv != 1 else T[r]
    T[r] = row
    nz = [j for j, v in enumerate(row) if v != 0]
    for i, Ti in enumerate(T):
        if i != r:
            f = Ti[c]
            if f != 0:
                Ti = list(Ti)
                for j in nz:
                    Ti[j] -= f * row[j]
                T[i] = Ti
    f = rc[c]
    if f != 0:
        for j in nz:
            rc[j] -= f * row[j]
    basis[r] = c


def _bland(T, rc, basis, n_allowed):
    """Run simplex pivots until optimal; returns False if unbounded."""
    while True:
        enter = next((j for j in range(n_allowed) if rc[j] < 0), None)
        if enter is None:
            return True
        best, best_ratio = None, None
        for i, Ti in enumerate(T):
            a = Ti[enter]
            if a > 0:
                ratio = Ti[-1] / a
                if (best is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[best])):
                    best, best_ratio = i, ratio
        if best is None:
            return False
        _pivot(T, rc, basis, best, enter)


def _reduced_costs(T, basis, cost):
    ncol = len(T[0]) - 1 if T else len(cost)
    rc = [cost[j] if j < len(cost) else mpq(0) for j in range(ncol)] + [mpq(0)]
    for i, Ti in enumerate(T):
        cb = cost[basis[i]] if basis[i] < len(cost) else mpq(0)
        if cb != 0:
            rc = [a - cb * b for a, b in zip(rc, Ti)]
    return rc


def _solve_dual(Ar, b, c):
    """min b.y  s.t.  Ar^T y = c, y >= 0.

    Returns ``(status, y, pi, basis)`` with status in {"optimal",
    "infeasible", "unbounded"} describing the *dual* problem.
    """
    m, d = len(Ar), len(c)
    sgn = [1 if ci >= 0 else -1 for ci in c]
    Aq = [[to_mpq(v) for v in row] for row in Ar]
    T = []
    for i in range(d):
        s = sgn[i]
        T.append([s * Aq[j][i] for j in range(m)]
                 + [mpq(int(k == i)) for k in range(d)]
                 + [s * to_mpq(c[i])])
    basis = [m + i for i in range(d)]

    phase1 = [mpq(0)] * m + [mpq(1)] * d
    rc = _reduced_costs(T, basis, phase1)
    _bland(T, rc, basis, m)
    if -rc[-1] > 0:
        return "infeasible", None, None, None
    for i in range(d):
        if basis[i] >= m:
            j = next((j for j in range(m) if T[i][j] != 0), None)
            if j is None:
                raise AssertionError("constraint matrix lost full column rank")
            _pivot(T, rc, basis, i, j)

    cost = [to_mpq(v) for v in b]
    rc = _reduced_costs(T, basis, cost)
    if not _bland(T, rc, basis, m):
        return "unbounded", None, None, None
    y = [Fraction(0)] * m
    for i, bj in enumerate(basis):
        y[bj] = from_mpq(T[i][-1])
    pi = []
    for i in range(d):
        acc = mpq(0)
        for r, bj in enumerate(basis):
            if cost[bj] != 0:
                acc += cost[bj] * T[r][m + i]
        pi.append(sgn[i] * from_mpq(acc))
    return "optimal", y, pi, list(basis)


def _feasible(R: _Reduced) -> bool:
    if R.eq_infeasible:
        return False
    if not R.Ar:
        return all(v >= 0 for v in R.bz)
    if not R.piv:
        return all(v >= 0 for v in R.bz)
    status, *_ = _solve_dual(R.Ar, R.bz, [Fraction(0)] * len(R.piv))
    return status == "optimal"


def _equation_duals(H: HRep, c, y):
    if not H.equations:
        return ()
    resid = list(c)
    for (a, _), yj in zip(H.inequalities, y):
        if yj != 0:
            resid = [r - yj * ai for r, ai in zip(resid, a)]
    cols = [[a[i] for a, _ in H.equations] for i in range(H.dim)]
    sol = solve_affine(cols, resid, len(H.equations))
    if sol is None:
        raise AssertionError("dual certificate for equations not found")
    return tuple(sol[0])


def _finish(H: HRep, c, x, y) -> LpResult:
    if not all(dot(a, x) <= b for a, b in H.inequalities) or \
            not all(dot(a, x) == b for a, b in H.equations):
        raise AssertionError("simplex returned an infeasible point")
    mu = _equation_duals(H, c, y)
    value = dot(c, x)
    dual_value = dot([b for _, b in H.inequalities], y) + dot([b for _, b in H.equations], mu)
    if dual_value != value:
        raise AssertionError("duality gap in exact LP")
    return LpResult(LpStatus.OPTIMAL, value, x, tuple(y), mu)


def _check_dim(c, H):
    if len(c) != H.dim:
        raise DimensionMismatch(f"objective of length {len(c)} vs dim {H.dim}")


def maximize(c: Sequence, H: HRep) -> LpResult:
    """Exact ``max c.x`` over H, with statuses instead of exceptions."""
    c = ratvec(c)
    _check_dim(c, H)
    R = _Reduced(H)
    if R.eq_infeasible:
        return _INFEASIBLE
    return _maximize_reduced(R, c)[0]


def _maximize_reduced(R: _Reduced, c):
    H = R.H
    cr, const, free = R.objective(c)
    if free:
        return (_UNBOUNDED if _feasible(R) else _INFEASIBLE), None
    if not R.piv:
        if all(v >= 0 for v in R.bz):
            x = R.lift([])
            y = [Fraction(0)] * len(H.inequalities)
            return _finish(H, c, x, y), None
        return _INFEASIBLE, None
    status, y, pi, basis = _solve_dual(R.Ar, R.bz, cr)
    if status == "unbounded":
        return _INFEASIBLE, None
    if status == "infeasible":
        return (_UNBOUNDED if _feasible(R) else _INFEASIBLE), None
    x = R.lift(pi)
    return _finish(H, c, x, y), basis


class WarmLP:
    """Repeatedly maximize different objectives over one fixed H.

    The first call (and any call after an unbounded/infeasible outcome) is
    solved cold by :func:`maximize`; later calls pivot from the previous
    optimal vertex.
    """

    def __init__(self, H: HRep):
        self.H = H
        self.R = _Reduced(H)
        self._basis: Optional[List[int]] = None
        self._Binv = None
        self._xz = None
        self.pivots = 0

    def maximize(self, c: Sequence) -> LpResult:
        c = ratvec(c)
        _check_dim(c, self.H)
        R = self.R
        if R.eq_infeasible:
            return _INFEASIBLE
        if self._basis is None:
            res, basis = _maximize_reduced(R, c)
            if res.optimal and basis is not None:
                self._basis = basis
                self._Binv = [[to_mpq(v) for v in row] for row in inverse([R.Ar[j] for j in basis])]
                self._xz = _basic_point(self._Binv, [to_mpq(R.bz[j]) for j in basis])
            return res
        cr, const, free = R.objective(c)
        if free:
            return _UNBOUNDED
        return self._primal_simplex(c, cr)

    def _primal_simplex(self, c, cr):
        R = self.R
        if not hasattr(R, "Aq"):
            R.Aq = [[to_mpq(v) for v in row] for row in R.Ar]
            R.bq = [to_mpq(v) for v in R.bz]
        Ar, bz = R.Aq, R.bq
        cr = [to_mpq(v) for v in cr]
        basis, Binv, x = self._basis, self._Binv, self._xz
        d = len(basis)
        in_basis = set(basis)
        slack = [bj - _qdot(a, x) for a, bj in zip(Ar, bz)]
        while True:
            y = [sum((cr[i] * Binv[i][p] for i in range(d)), mpq(0)) for p in range(d)]
            cand = [p for p in range(d) if y[p] < 0]
            if not cand:
                break
            p = min(cand, key=lambda q: basis[q])
            direction = [-Binv[i][p] for i in range(d)]
            best, best_t = None, None
            ads = []
            for j, a in enumerate(Ar):
                ad = _qdot(a, direction)
                ads.append(ad)
                if j in in_basis or ad <= 0:
                    continue
                t = slack[j] / ad
                if best is None or t < best_t:
                    best, best_t = j, t
            if best is None:
                self._basis = None
                return _UNBOUNDED
            t = best_t
            if t != 0:
                x = [xi + t * di for xi, di in zip(x, direction)]
                slack = [s - t * ad for s, ad in zip(slack, ads)]
            a_new = Ar[best]
            w = [sum((a_new[i] * Binv[i][q] for i in range(d)), mpq(0)) for q in range(d)]
            wp = w[p]
            colp = [Binv[i][p] / wp for i in range(d)]
            for q in range(d):
                if q != p and w[q] != 0:
                    wq = w[q]
                    for i in range(d):
                        Binv[i][q] -= wq * colp[i]
            for i in range(d):
                Binv[i][p] = colp[i]
            in_basis.discard(basis[p])
            basis[p] = best
            in_basis.add(best)
            slack[best] = mpq(0)
            self.pivots += 1
        self._xz = x
        yfull = [Fraction(0)] * len(Ar)
        for p, j in enumerate(basis):
            yfull[j] = from_mpq(y[p])
        return _finish(self.H, c, R.lift([from_mpq(v) for v in x]), yfull)


def _basic_point(Binv, bB):
    d = len(bB)
    return [sum((Binv[i][q] * bB[q] for q in range(d)), mpq(0)) for i in range(d)]


def member_vrep(V, x: Sequence) -> bool:
    """Is x in conv(V.vertices)?

    Solved as the separation LP ``max a.x - b`` over ``a.v <= b`` for every
    vertex v and ``-1 <= a <= 1``; x is inside exactly when the optimum is 0.
    Vertex rows are generated lazily: solve with the rows found so far, add
    the vertex that most violates the current (a, b), repeat.  The final LP
    certifies the answer for the full row set.
    """
    x = ratvec(x)
    n = V.dim
    if len(x) != n:
        raise DimensionMismatch(f"point of length {len(x)} vs dim {n}")
    if not V.bounded:
        raise ValueError("member_vrep needs a bounded V")
    box = []
    for i in range(n):
        e = [Fraction(0)] * (n + 1)
        e[i] = Fraction(1)
        box.append((tuple(e), Fraction(1)))
        e[i] = Fraction(-1)
        box.append((tuple(e), Fraction(1)))
    verts = list(V.vertices)
    qverts = [[to_mpq(t) for t in v] for v in verts]
    active = {0}
    c = tuple(x) + (Fraction(-1),)
    while True:
        rows = [(tuple(verts[j]) + (Fraction(-1),), Fraction(0)) for j in sorted(active)]
        res = maximize(c, HRep(n + 1, tuple(rows + box)))
        if not res.optimal:
            raise ArithmeticError("separation LP is bounded by construction")
        if res.value <= 0:
            return True
        a, b = [to_mpq(t) for t in res.argmax[:n]], to_mpq(res.argmax[n])
        viol = sorted(((_qdot(a, v) - b, j) for j, v in enumerate(qverts)), reverse=True)
        if viol[0][0] <= 0:
            return False
        active.update(j for gap, j in viol[:n + 1] if gap > 0)
