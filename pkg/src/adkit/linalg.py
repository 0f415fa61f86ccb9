"""Small dense exact linear algebra over a field (Fraction or QuadExt).

Everything here is plain Gaussian elimination with exact division; matrices
are lists of row lists.  Determinants of polynomial matrices are computed by
cofactor expansion since no division is available there.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .errors import SingularMatrix
from .scalars import Poly


def _is_zero(x) -> bool:
    return x == 0


def rref(rows: Sequence[Sequence]) -> tuple[List[List], List[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices).

    Zero rows are dropped.  Deterministic: pivots are chosen left to right,
    first nonzero row wins.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if not _is_zero(m[i][col]):
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][col]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not _is_zero(m[i][col]):
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of the right nullspace, one vector per free column.

    The basis is canonical: reduced echelon constraints, free variables set
    to 1 one at a time, in increasing column order.
    """
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def det(rows: Sequence[Sequence]):
    """Determinant by fraction-free-ish elimination with exact division."""
    m = [list(r) for r in rows]
    n = len(m)
    result = Fraction(1)
    sign = 1
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if not _is_zero(m[i][col]):
                pivot = i
                break
        if pivot is None:
            return Fraction(0) * result
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        result = result * p
        for i in range(col + 1, n):
            if not _is_zero(m[i][col]):
                f = m[i][col] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return result * sign


def invert(rows: Sequence[Sequence]) -> List[List]:
    """Matrix inverse by Gauss-Jordan; raises SingularMatrix when singular."""
    n = len(rows)
    m = [list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if not _is_zero(m[i][col]):
                pivot = i
                break
        if pivot is None:
            raise SingularMatrix("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        inv = m[col][col]
        m[col] = [x / inv for x in m[col]]
        for i in range(n):
            if i != col and not _is_zero(m[i][col]):
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [row[n:] for row in m]


def det_poly(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a polynomial matrix by cofactor expansion."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Poly.zero()
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [[rows[i][c] for c in range(n) if c != j] for i in range(1, n)]
        cofactor = entry * det_poly(minor)
        total = total + (cofactor if j % 2 == 0 else -cofactor)
    return total


def in_span(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> bool:
    """Is ``target`` in the rational span of ``vectors``?"""
    base = [list(v) for v in vectors]
    return rank(base) == rank(base + [list(target)])


def span_dim(vectors: Sequence[Sequence[Fraction]]) -> int:
    return rank([list(v) for v in vectors])


def same_span(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> bool:
    ra = rank([list(v) for v in a])
    rb = rank([list(v) for v in b])
    if ra != rb:
        return False
    return rank([list(v) for v in a] + [list(v) for v in b]) == ra
