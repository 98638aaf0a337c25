"""Double description method and the V <-> H conversions built on it.

The core works on integer vectors only: every new ray is an integer
combination of two old ones followed by division by the gcd, so no
Fractions are created inside the main loop.  Adjacency uses the
combinatorial test on tight-constraint bitmasks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from ..errors import Infeasible, Unbounded
from ..exact import primitive, to_primitive_ints
from .linalg import rref
from .reps import HRep, VRep

IntVec = Tuple[int, ...]


def _idot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _comb(s: int, u: IntVec, t: int, v: IntVec) -> IntVec:
    return primitive([s * x + t * y for x, y in zip(u, v)])


def dd_cone(eq_rows: Sequence[IntVec], ineq_rows: Sequence[IntVec], dim: int):
    """Generators of the cone ``{z : E z = 0, R z >= 0}``.

    Returns ``(rays, lineality, tight)`` where ``tight[i]`` is the bitmask of
    inequality rows (by position in ``ineq_rows``) that ray ``i`` satisfies
    with equality.  Rays are extreme modulo the lineality space.
    """
    lin: List[IntVec] = [tuple(int(i == j) for i in range(dim)) for j in range(dim)]
    for r in eq_rows:
        j = next((i for i, l in enumerate(lin) if _idot(r, l) != 0), None)
        if j is None:
            continue
        piv = lin.pop(j)
        rp = _idot(r, piv)
        lin = [_comb(rp, l, -_idot(r, l), piv) for l in lin]
    space_dim = len(lin)

    rays: List[IntVec] = []
    tight: List[int] = []
    for idx, r in enumerate(ineq_rows):
        bit = 1 << idx
        j = next((i for i, l in enumerate(lin) if _idot(r, l) != 0), None)
        if j is not None:
            piv = lin.pop(j)
            rp = _idot(r, piv)
            if rp < 0:
                piv = tuple(-x for x in piv)
                rp = -rp
            lin = [_comb(rp, l, -_idot(r, l), piv) for l in lin]
            rays = [_comb(rp, ray, -_idot(r, ray), piv) for ray in rays]
            tight = [z | bit for z in tight]
            rays.append(piv)
            tight.append(bit - 1)
            continue

        vals = [_idot(r, ray) for ray in rays]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            tight = [z | bit if v == 0 else z for z, v in zip(tight, vals)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        need = space_dim - len(lin) - 2
        new_rays, new_tight = [], []
        for p in pos:
            zp = tight[p]
            for q in neg:
                common = zp & tight[q]
                if common.bit_count() < need:
                    continue
                adjacent = True
                for o, zo in enumerate(tight):
                    if o != p and o != q and zo & common == common:
                        adjacent = False
                        break
                if adjacent:
                    new_rays.append(_comb(vals[p], rays[q], -vals[q], rays[p]))
                    new_tight.append(common | bit)
        rays = [rays[i] for i in pos] + [rays[i] for i in zero] + new_rays
        tight = [tight[i] for i in pos] + [tight[i] | bit for i in zero] + new_tight
    return rays, lin, tight


def _row_order(row: IntVec):
    # sparse rows first, then lexicographic: box-like rows bound the cone early
    return (sum(1 for x in row[1:] if x != 0), row)


def _canonical_equations(eqs: List[Tuple[List[Fraction], Fraction]], dim: int):
    """RREF of equation rows ``a x = b``; returns (rref rows as [a|b], pivots)."""
    if not eqs:
        return [], []
    return rref([list(a) + [b] for a, b in eqs], dim)


def _reduce_mod(vec: List[Fraction], red, piv) -> List[Fraction]:
    vec = list(vec)
    for row, p in zip(red, piv):
        f = vec[p]
        if f != 0:
            vec = [x - f * y for x, y in zip(vec, row)]
    return vec


def _int_eq_row(row: Sequence[Fraction]) -> IntVec:
    """Primitive integer equation row with positive leading nonzero."""
    ints = to_primitive_ints(row)
    lead = next((x for x in ints if x != 0), 0)
    return tuple(-x for x in ints) if lead < 0 else ints


def v_to_h(P: VRep) -> HRep:
    """Irredundant inequality description of ``conv(V) + cone(R) + span(L)``.

    Equations span the affine hull, in reduced echelon form with primitive
    integer rows.  Inequality normals are reduced modulo the equations (zero on
    every equation pivot) and scaled to primitive integers.
    """
    d = P.dim
    eq_rows = [(0,) + to_primitive_ints(l) for l in P.lineality]
    ineq_rows = [to_primitive_ints((Fraction(1),) + tuple(v)) for v in sorted(P.vertices)]
    ineq_rows += [(0,) + to_primitive_ints(r) for r in sorted(P.rays)]
    rays, lin, _ = dd_cone(eq_rows, ineq_rows, d + 1)

    eqs = [([Fraction(-x) for x in w[1:]], Fraction(w[0])) for w in lin]
    red, piv = _canonical_equations(eqs, d)
    equations = []
    for row in red:
        ints = _int_eq_row(row)
        equations.append((ints[:d], ints[d]))

    seen = set()
    inequalities = []
    for w in rays:
        a = [Fraction(-x) for x in w[1:]]
        if all(x == 0 for x in a):
            continue
        vec = _reduce_mod(a + [Fraction(w[0])], red, piv)
        if all(x == 0 for x in vec[:d]):
            continue
        ints = to_primitive_ints(vec)
        if ints not in seen:
            seen.add(ints)
            inequalities.append((ints[:d], ints[d]))
    inequalities.sort(key=lambda ab: (tuple(ab[0]), ab[1]))
    return HRep(d, tuple(inequalities), tuple(equations))


def _homogenize(H: HRep):
    eq_rows = [to_primitive_ints((b,) + tuple(-x for x in a)) for a, b in H.equations]
    ineq_rows = sorted({to_primitive_ints((b,) + tuple(-x for x in a)) for a, b in H.inequalities},
                       key=_row_order)
    return eq_rows, [(1,) + (0,) * H.dim] + ineq_rows


def _canonical_generators(H: HRep, rays, lin):
    d = H.dim
    lin_red, lin_piv = rref([[Fraction(x) for x in l[1:]] for l in lin], d) if lin else ([], [])
    vertices, directions = set(), set()
    for w in rays:
        if w[0] > 0:
            v = [Fraction(x, w[0]) for x in w[1:]]
            vertices.add(tuple(_reduce_mod(v, lin_red, lin_piv)))
        else:
            r = _reduce_mod([Fraction(x) for x in w[1:]], lin_red, lin_piv)
            if any(x != 0 for x in r):
                directions.add(tuple(Fraction(x) for x in to_primitive_ints(r)))
    lineality = [tuple(to_primitive_ints(row)) for row in lin_red]
    return sorted(vertices), sorted(directions), lineality


def h_to_v(H: HRep, vertices_only: bool = False) -> VRep:
    """Vertices (plus rays and lineality) of an H-described polyhedron.

    Raises :class:`Infeasible` for an empty set and, with ``vertices_only``,
    :class:`Unbounded` when rays or lineality are present.
    """
    V, _ = _h_to_v_with_tight(H)
    if vertices_only and not V.bounded:
        raise Unbounded("polyhedron is unbounded", V.rays, V.lineality)
    return V


def _h_to_v_with_tight(H: HRep):
    if H.infeasible:
        raise Infeasible("inconsistent zero row")
    eq_rows, ineq_rows = _homogenize(H)
    rays, lin, tight = dd_cone(eq_rows, ineq_rows, H.dim + 1)
    vertices, directions, lineality = _canonical_generators(H, rays, lin)
    if not vertices:
        raise Infeasible("polyhedron is empty")
    V = VRep(H.dim, tuple(vertices), tuple(lineality), tuple(directions))
    return V, (rays, lin, tight)


def reduce_hrep(H: HRep) -> Tuple[HRep, VRep]:
    """Drop redundant rows of ``H`` while keeping the surviving rows verbatim.

    Facets are the non-implicit inequalities whose tight sets (over the
    vertices and rays of the polyhedron) are inclusion-maximal; one row per
    facet is kept, preferring sparser rows.  Implicit equalities join the
    equations, from which a linearly independent subset is retained.
    Returns the reduced system and the generators computed on the way.
    """
    V = h_to_v(H)
    d = H.dim
    gens_v = list(V.vertices)
    gens_r = list(V.rays)

    def tight_mask(a, b):
        m = 0
        for i, v in enumerate(gens_v):
            if sum(x * y for x, y in zip(a, v)) == b:
                m |= 1 << i
        off = len(gens_v)
        for i, r in enumerate(gens_r):
            if sum(x * y for x, y in zip(a, r)) == 0:
                m |= 1 << (off + i)
        return m

    full = (1 << (len(gens_v) + len(gens_r))) - 1
    rows = {}
    for a, b in H.inequalities:
        ints = to_primitive_ints(tuple(a) + (b,))
        rows.setdefault(ints, None)
    ordered = sorted(rows, key=lambda r: (sum(1 for x in r[:d] if x != 0), r))

    implicit, candidates = [], []
    for r in ordered:
        a, b = r[:d], r[d]
        m = tight_mask(a, b)
        if m == full:
            implicit.append(r)
        else:
            candidates.append((m, r))

    masks = sorted({m for m, _ in candidates}, key=lambda m: -m.bit_count())
    maximal = []
    for m in masks:
        if not any(m & big == m for big in maximal):
            maximal.append(m)
    maximal_set = set(maximal)
    chosen, used = [], set()
    for m, r in candidates:
        if m in maximal_set and m not in used:
            used.add(m)
            chosen.append(r)

    eq_cands = [to_primitive_ints(tuple(a) + (b,)) for a, b in H.equations]
    eq_cands += [r for r in implicit]
    eq_cands = sorted(set(_int_eq_row([Fraction(x) for x in r]) for r in eq_cands),
                      key=lambda r: (sum(1 for x in r[:d] if x != 0), r))
    equations, basis = [], []
    for r in eq_cands:
        trial = basis + [list(r[:d])]
        if len(rref(trial)[1]) > len(basis):
            basis = trial
            equations.append((r[:d], r[d]))

    inequalities = [(r[:d], r[d]) for r in chosen]
    return HRep(d, tuple(inequalities), tuple(equations)), V
