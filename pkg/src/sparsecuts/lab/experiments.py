"""k-sweeps of dist(P, P^k) with shooting lower bounds and the closed-form bounds."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from ..bounds import bound_report
from ..closure import sampled_closure, sparse_closure
from ..distance import exact_dist, shoot
from ..errors import BudgetExceeded
from ..exact import fmt_rat, norm_sq
from ..kernel.reps import VRep

SWEEP_COLUMNS = ["k", "dist_sq", "dist_float", "k_dist_float", "lb_shoot_sq", "lb_shoot_float",
                 "ub1", "ub2", "phase", "flags"]


@dataclass
class SweepRow:
    k: int
    dist_sq: Optional[Fraction]
    lb_shoot_sq: Optional[Fraction]
    ub1: float
    ub2: float
    phase: str
    flags: List[str] = field(default_factory=list)

    @property
    def dist_float(self) -> Optional[float]:
        return None if self.dist_sq is None else math.sqrt(self.dist_sq)

    @property
    def k_dist_float(self) -> Optional[float]:
        d = self.dist_float
        return None if d is None else self.k * d

    def as_csv(self) -> List[str]:
        def f(x):
            return "" if x is None else repr(float(x))
        lb_float = None if self.lb_shoot_sq is None else math.sqrt(self.lb_shoot_sq)
        return [str(self.k),
                "" if self.dist_sq is None else fmt_rat(self.dist_sq),
                f(self.dist_float), f(self.k_dist_float),
                "" if self.lb_shoot_sq is None else fmt_rat(self.lb_shoot_sq),
                f(lb_float), f(self.ub1), f(self.ub2), self.phase, ";".join(self.flags)]


def _bbox(P: VRep):
    lo = tuple(min(v[i] for v in P.vertices) for i in range(P.dim))
    hi = tuple(max(v[i] for v in P.vertices) for i in range(P.dim))
    return lo, hi


def sweep(P: VRep, ks: Iterable[int], seed: int = 0, dirs: int = 0, box=None,
          budget_vertices: int = 200_000, budget_supports: int = 10 ** 6,
          sample_supports: Optional[int] = None, reduce: str = "dd",
          exact: bool = True) -> List[SweepRow]:
    """One row per k.

    dist is exact when the closure's vertex count stays under
    ``budget_vertices``; otherwise the row is flagged and only the shooting
    bound (always run when ``dirs > 0``) is reported.  When the support
    count exceeds ``budget_supports`` and ``sample_supports`` is set, a
    sampled outer approximation replaces P^k and the row is flagged.
    ``exact=False`` skips the exact distance (flag "dist-skipped"); with
    ``reduce="lp"`` this keeps closures in dimension ten or so tractable.
    """
    n, t = P.dim, len(P.vertices)
    box = box if box is not None else _bbox(P)
    vnorm = math.sqrt(max(norm_sq(v) for v in P.vertices))
    rows = []
    for k in sorted(set(ks)):
        rep = bound_report(n, t, k, vnorm)
        flags: List[str] = []
        try:
            C = sparse_closure(P, k, box, budget=budget_supports, reduce=reduce)
        except BudgetExceeded:
            if sample_supports is None:
                raise
            C = sampled_closure(P, k, box, sample_supports, seed, reduce=reduce)
            flags.append("sampled-supports")
        dsq = None
        if not exact:
            flags.append("dist-skipped")
        else:
            try:
                dsq = exact_dist(P, C, cap=budget_vertices).dist_sq
            except BudgetExceeded:
                flags.append("dist-budget-exceeded")
        if C.outer_approx and dsq is not None:
            flags.append("dist-of-outer-approx")
        lb = None
        if dirs > 0 or dsq is None:
            lb = shoot(P, C, num_dirs=max(dirs, 0), seed=seed,
                       extra_dirs=_unit_dirs(n)).best_lb_sq
        rows.append(SweepRow(k, dsq, lb, rep.ub1, rep.ub2, rep.phase.value, flags))
    return rows


def _unit_dirs(n: int) -> List[Sequence[int]]:
    out = []
    for i in range(n):
        for s in (1, -1):
            u = [0] * n
            u[i] = s
            out.append(tuple(u))
    return out


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow(r.as_csv())
