"""Small dense linear algebra over Fractions (row reduction, null spaces, solves)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..exact import from_mpq, to_mpq

Matrix = List[List[Fraction]]


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; pivots are searched only in the first ``ncols`` columns.

    Zero rows are dropped.  Returns ``(rows, pivot_columns)``.
    """
    m = [[to_mpq(v) for v in r] for r in rows]
    if not m:
        return [], []
    width = len(m[0])
    ncols = width if ncols is None else ncols
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [v / pv for v in m[r]]
        row = m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], row)] if f != 0 else m[i]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    out = [row for row in m[:r]]
    # rows beyond r are zero in the first ncols columns; keep any that are not
    for row in m[r:]:
        if any(v != 0 for v in row):
            out.append(row)
    return [[from_mpq(v) for v in row] for row in out], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of ``{z : rows z = 0}``; one vector per free column, with a 1 there."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        z = [Fraction(0)] * ncols
        z[f] = Fraction(1)
        for row, p in zip(red, piv):
            z[p] = -row[f]
        basis.append(z)
    return basis


def solve_affine(E: Sequence[Sequence], f: Sequence, ncols: int):
    """Parametrize ``{x : E x = f}`` as ``x0 + N z``.

    Returns ``(x0, N, pivots)`` with N given as a list of column vectors, or
    ``None`` if the system is inconsistent.  ``x0`` has zeros in free columns.
    """
    if not E:
        return [Fraction(0)] * ncols, nullspace([], ncols), []
    aug = [list(r) + [fv] for r, fv in zip(E, f)]
    red, piv = rref(aug, ncols)
    for row in red[len(piv):]:
        if row[ncols] != 0:
            return None
    x0 = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x0[p] = row[ncols]
    N = nullspace([row[:ncols] for row in red[:len(piv)]], ncols)
    return x0, N, piv


def solve_square(A: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """Unique solution of a square system, or None when singular."""
    n = len(A)
    aug = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(A, b)]
    red, piv = rref(aug, n)
    if len(piv) < n:
        return None
    return [red[i][n] for i in range(n)]


def inverse(A: Sequence[Sequence]) -> Optional[Matrix]:
    n = len(A)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(A)]
    red, piv = rref(aug, n)
    if len(piv) < n:
        return None
    return [row[n:] for row in red]
