"""Vertex and inequality representations of polyhedra."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from ..errors import DimensionMismatch
from ..exact import RatVec, rat, ratvec

Row = Tuple[RatVec, Fraction]


def _dedupe(items):
    seen = set()
    out = []
    for it in items:
        if it not in seen:
            seen.add(it)
            out.append(it)
    return tuple(out)


@dataclass(frozen=True)
class VRep:
    """``conv(vertices) + cone(rays) + span(lineality)``.

    Duplicate vertices are dropped on construction (first occurrence wins).
    ``meta`` carries free-form bookkeeping and is ignored by equality.
    """

    dim: int
    vertices: Tuple[RatVec, ...]
    lineality: Tuple[RatVec, ...] = ()
    rays: Tuple[RatVec, ...] = ()
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        verts = _dedupe(ratvec(v) for v in self.vertices)
        if not verts:
            raise ValueError("a VRep needs at least one vertex")
        lin = tuple(ratvec(v) for v in self.lineality)
        rays = _dedupe(ratvec(v) for v in self.rays)
        for v in verts + lin + rays:
            if len(v) != self.dim:
                raise DimensionMismatch(f"generator {v} is not of length {self.dim}")
        for v in lin + rays:
            if all(x == 0 for x in v):
                raise ValueError("zero direction in lineality/rays")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "lineality", lin)
        object.__setattr__(self, "rays", rays)

    @property
    def bounded(self) -> bool:
        return not self.lineality and not self.rays

    def vertex_set(self):
        return frozenset(self.vertices)


@dataclass(frozen=True)
class HRep:
    """``{x : a x <= b for every inequality, a x = b for every equation}``.

    Trivial rows (zero normal and consistent right-hand side) are dropped.  A
    zero-normal row that cannot be satisfied sets ``infeasible``.
    """

    dim: int
    inequalities: Tuple[Row, ...]
    equations: Tuple[Row, ...] = ()
    infeasible: bool = False

    def __post_init__(self):
        bad = self.infeasible
        ineqs, eqs = [], []
        for a, b in self.inequalities:
            a, b = ratvec(a), rat(b)
            self._check(a)
            if all(x == 0 for x in a):
                bad = bad or b < 0
                continue
            ineqs.append((a, b))
        for a, b in self.equations:
            a, b = ratvec(a), rat(b)
            self._check(a)
            if all(x == 0 for x in a):
                bad = bad or b != 0
                continue
            eqs.append((a, b))
        object.__setattr__(self, "inequalities", tuple(ineqs))
        object.__setattr__(self, "equations", tuple(eqs))
        object.__setattr__(self, "infeasible", bad)

    def _check(self, a):
        if len(a) != self.dim:
            raise DimensionMismatch(f"row of length {len(a)} in a dim-{self.dim} HRep")

    @classmethod
    def from_rows(cls, A: Sequence[Sequence], b: Sequence, E: Sequence[Sequence] = (),
                  f: Sequence = (), dim: int = None) -> "HRep":
        if dim is None:
            dim = len(A[0]) if len(A) else len(E[0])
        return cls(dim, tuple(zip(A, b)), tuple(zip(E, f)))

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "HRep":
        n = len(lo)
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append((tuple(e), hi[i]))
            e = [0] * n
            e[i] = -1
            rows.append((tuple(e), -rat(lo[i])))
        return cls(n, tuple(rows))

    def intersect(self, other: "HRep") -> "HRep":
        if other.dim != self.dim:
            raise DimensionMismatch("cannot intersect polyhedra of different dimension")
        return HRep(self.dim, self.inequalities + other.inequalities,
                    self.equations + other.equations, self.infeasible or other.infeasible)

    def rows_as_inequalities(self) -> Tuple[Row, ...]:
        """Inequalities plus both orientations of every equation."""
        out = list(self.inequalities)
        for a, b in self.equations:
            out.append((a, b))
            out.append((tuple(-x for x in a), -b))
        return tuple(out)


def cube(n: int, lo=0, hi=1) -> Tuple[RatVec, RatVec]:
    return tuple(rat(lo) for _ in range(n)), tuple(rat(hi) for _ in range(n))


def as_vrep(points: Iterable[Sequence], dim: int = None) -> VRep:
    pts = [ratvec(p) for p in points]
    return VRep(dim or len(pts[0]), tuple(pts))
