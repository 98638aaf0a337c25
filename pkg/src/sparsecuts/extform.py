"""Sparse cuts in extended space: the tau operator, the binary-tree formulation
of the half-cube, and the containment proj_x(Q^k) ⊆ (proj_x Q)^k."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from .closure import _support, sparse_closure
from .errors import NotPowerOfTwo
from .exact import RatVec
from .kernel.dd import h_to_v, v_to_h
from .kernel.fm import project
from .kernel.ops import contains, equal_sets
from .kernel.reps import HRep, VRep
from .rng import derive_rng


def _unit(n: int, j: int) -> RatVec:
    return tuple(Fraction(int(i == j)) for i in range(n))


def tau(S: Union[VRep, HRep], I) -> Union[VRep, HRep]:
    """``S + R^{Ibar}``: coordinates outside I become free.

    V-side: add unit lineality generators.  H-side: project onto I and lift
    the rows back with zeros outside I.
    """
    n = S.dim
    idx = _support(I, n).indices
    free = [j for j in range(n) if j not in idx]
    if isinstance(S, VRep):
        lin = S.lineality + tuple(_unit(n, j) for j in free)
        return VRep(n, S.vertices, lin, S.rays, meta=dict(S.meta))
    if not free:
        return S
    H = project(S, idx)

    def lift(a):
        full = [Fraction(0)] * n
        for i, x in zip(idx, a):
            full[i] = x
        return tuple(full)

    return HRep(n, tuple((lift(a), b) for a, b in H.inequalities),
                tuple((lift(a), b) for a, b in H.equations), H.infeasible)


@dataclass(frozen=True)
class ExtendedSet:
    """Q in R^n x R^m with the x block first."""

    Q: HRep
    n: int
    box: Optional[Tuple[RatVec, RatVec]] = None

    def __post_init__(self):
        if not 1 <= self.n <= self.Q.dim:
            raise ValueError("x block must be a nonempty prefix of the coordinates")

    @property
    def m(self) -> int:
        return self.Q.dim - self.n

    @property
    def x_indices(self) -> Tuple[int, ...]:
        return tuple(range(self.n))

    @property
    def y_indices(self) -> Tuple[int, ...]:
        return tuple(range(self.n, self.Q.dim))

    def proj_x(self) -> HRep:
        return project(self.Q, self.x_indices)


@dataclass(frozen=True)
class TreeFormulation:
    """Complete binary tree over n leaves, heap-indexed: node v has children 2v+1, 2v+2.

    Leaves are nodes n-1 .. 2n-2 and leaf n-1+i carries x_i.  Variable order
    is x_0..x_{n-1} then y_0..y_{2n-2}.
    """

    n: int
    Q: HRep

    @property
    def m(self) -> int:
        return 2 * self.n - 1

    def y_var(self, v: int) -> int:
        return self.n + v

    def leaf(self, i: int) -> int:
        return self.n - 1 + i

    def is_internal(self, v: int) -> bool:
        return v < self.n - 1

    def extended_set(self) -> ExtendedSet:
        dim = self.n + self.m
        zero, one = (Fraction(0),) * dim, (Fraction(1),) * dim
        return ExtendedSet(self.Q, self.n, (zero, one))


def _check_pow2(n: int):
    if n < 1 or n & (n - 1):
        raise NotPowerOfTwo(f"{n} is not a power of two")


def build_tree_extform(n: int) -> TreeFormulation:
    """The displayed system, with leaf y's kept as explicit variables.

    Leaf equations are scaled to ``n y_leaf - 2 x_i = 0``.
    """
    _check_pow2(n)
    m = 2 * n - 1
    dim = n + m

    def row(**coef):
        a = [0] * dim
        for key, val in coef.items():
            a[int(key[1:])] += val
        return tuple(a)

    ineqs, eqs = [], []
    ineqs.append((row(**{f"v{n}": 1}), 1))  # y_root <= 1
    for v in range(m):
        yv = n + v
        if v < n - 1:
            a = [0] * dim
            a[yv], a[n + 2 * v + 1], a[n + 2 * v + 2] = 1, -1, -1
            eqs.append((tuple(a), 0))
        else:
            a = [0] * dim
            a[yv], a[v - (n - 1)] = n, -2
            eqs.append((tuple(a), 0))
        a = [0] * dim
        a[yv] = -1
        ineqs.append((tuple(a), 0))
    for i in range(n):
        a = [0] * dim
        a[i] = 1
        ineqs.append((tuple(a), 1))
        a = [0] * dim
        a[i] = -1
        ineqs.append((tuple(a), 0))
    return TreeFormulation(n, HRep(dim, tuple(ineqs), tuple(eqs)))


def substituted_tree_extform(n: int) -> ExtendedSet:
    """Variant without leaf y's: every leaf reference is replaced by (2/n) x_i.

    Coordinates are x_0..x_{n-1} then the n-1 internal nodes in heap order.
    """
    _check_pow2(n)
    q = n - 1
    dim = n + q
    two_n = Fraction(2, n)

    def ref(v, a, s):
        if v < q:
            a[n + v] += s
        else:
            a[v - q] += s * two_n

    ineqs, eqs = [], []
    a = [Fraction(0)] * dim
    ref(0, a, 1)
    ineqs.append((tuple(a), 1))
    for v in range(q):
        a = [Fraction(0)] * dim
        ref(v, a, 1)
        ref(2 * v + 1, a, -1)
        ref(2 * v + 2, a, -1)
        eqs.append((tuple(a), 0))
        a = [Fraction(0)] * dim
        a[n + v] = Fraction(-1)
        ineqs.append((tuple(a), 0))
    for i in range(n):
        a = [0] * dim
        a[i] = 1
        ineqs.append((tuple(a), 1))
        a = [0] * dim
        a[i] = -1
        ineqs.append((tuple(a), 0))
    return ExtendedSet(HRep(dim, tuple(ineqs), tuple(eqs)), n)


def support_audit(Q: HRep) -> int:
    """Largest support among the defining rows (equations count like inequalities)."""
    return max(sum(1 for x in a if x != 0) for a, _ in Q.inequalities + Q.equations)


def _bounding_box(V: VRep):
    lo = tuple(min(v[i] for v in V.vertices) for i in range(V.dim))
    hi = tuple(max(v[i] for v in V.vertices) for i in range(V.dim))
    return lo, hi


@dataclass
class Prop3Report:
    k: int
    proj_equals_P: bool       # the extended set really describes P
    contained: bool           # proj_x(Q^k) ⊆ P^k
    proj_closure_equals_P: bool
    proj_closure_equals_Pk: bool
    proj_closure: HRep
    P_closure: HRep


def check_prop3(P: VRep, E: ExtendedSet, k: int) -> Prop3Report:
    """Compute Q^k in extended space, project it to x and compare with P^k.

    The box used for Q^k is ``E.box`` when given (for the tree, every
    coordinate in [0, 1]) and the bounding box of Q's vertices otherwise.
    Box rows are valid 1-sparse cuts either way, so the closure is the same.
    """
    QV = h_to_v(E.Q, vertices_only=True)
    proj = E.proj_x()
    proj_ok = equal_sets(proj, P)
    qbox = E.box if E.box is not None else _bounding_box(QV)
    Qk = sparse_closure(QV, k, qbox)
    proj_k = project(Qk.closure, E.x_indices)
    kx = min(k, E.n)
    pbox = (qbox[0][:E.n], qbox[1][:E.n])
    Pk = sparse_closure(P, kx, pbox)
    proj_kV = h_to_v(proj_k)
    contained = contains(Pk.closure, proj_kV)
    return Prop3Report(k, proj_ok, contained, equal_sets(proj_k, P),
                       equal_sets(proj_k, Pk.closure), proj_k, Pk.closure)


def random_extended_set(nx: int, ny: int, npts: int, seed: int, span: int = 2) -> Tuple[ExtendedSet, VRep]:
    """Q = conv of random integer points in [0, span]^(nx+ny), and P = its x-shadow."""
    rng = derive_rng(seed, "extset", nx, ny, npts)
    dim = nx + ny
    pts = {tuple(int(v) for v in rng.integers(0, span + 1, size=dim)) for _ in range(npts)}
    QV = VRep(dim, tuple(sorted(pts)))
    Q = v_to_h(QV)
    P = VRep(nx, tuple(sorted({p[:nx] for p in pts})))
    return ExtendedSet(Q, nx), P
