"""Exact membership, containment and set-equality tests."""

from __future__ import annotations

from typing import Sequence, Union

from ..errors import DimensionMismatch
from ..exact import dot, ratvec
from .dd import h_to_v, v_to_h
from .reps import HRep, VRep

Rep = Union[HRep, VRep]


def member(H: HRep, x: Sequence) -> bool:
    x = ratvec(x)
    if len(x) != H.dim:
        raise DimensionMismatch(f"point of length {len(x)} vs dim {H.dim}")
    if H.infeasible:
        return False
    return (all(dot(a, x) <= b for a, b in H.inequalities)
            and all(dot(a, x) == b for a, b in H.equations))


def contains(A: HRep, B: VRep) -> bool:
    """Is the set described by ``B`` inside ``A``?"""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dim {A.dim} vs dim {B.dim}")
    if not all(member(A, v) for v in B.vertices):
        return False
    for r in B.rays:
        if any(dot(a, r) > 0 for a, _ in A.inequalities):
            return False
        if any(dot(a, r) != 0 for a, _ in A.equations):
            return False
    for l in B.lineality:
        if any(dot(a, l) != 0 for a, _ in A.inequalities + A.equations):
            return False
    return True


def _both(S: Rep):
    if isinstance(S, HRep):
        return S, h_to_v(S)
    return v_to_h(S), S


def equal_sets(A: Rep, B: Rep) -> bool:
    """Mutual containment after converting each side to both representations."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dim {A.dim} vs dim {B.dim}")
    AH, AV = _both(A)
    BH, BV = _both(B)
    return contains(AH, BV) and contains(BH, AV)
