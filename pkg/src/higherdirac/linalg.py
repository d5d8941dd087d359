"""Exact linear algebra over QQ on lists of Fraction rows (sympy DomainMatrix)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Rows = Sequence[Sequence[Fraction]]


def _dm(rows: Rows, ncols: int) -> DomainMatrix:
    data = []
    for row in rows:
        out = []
        for c in row:
            c = Fraction(c)
            out.append(QQ(c.numerator, c.denominator))
        data.append(out)
    for row in data:
        if len(row) != ncols:
            raise ValueError(f"row of length {len(row)}, expected {ncols}")
    return DomainMatrix(data, (len(data), ncols), QQ)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def rank(rows: Rows, ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return _dm(rows, ncols).rank()


def row_basis(rows: Rows, ncols: int) -> list[list[Fraction]]:
    """Reduced echelon basis of the row span."""
    if not rows or not ncols:
        return []
    red, pivots = _dm(rows, ncols).rref()
    mat = red.to_list()
    return [[_frac(c) for c in mat[i]] for i in range(len(pivots))]


def nullspace(rows: Rows, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : r . v = 0 for every row r}``."""
    if not ncols:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows, ncols).nullspace().to_list()
    return [[_frac(c) for c in row] for row in ns]


def contains(span: Rows, vec: Sequence[Fraction], ncols: int) -> bool:
    if not any(vec):
        return True
    return rank(list(span) + [vec], ncols) == rank(span, ncols)


def included(a: Rows, b: Rows, ncols: int) -> bool:
    """Row span of ``a`` inside row span of ``b``."""
    rb = rank(b, ncols)
    return rank(list(a) + list(b), ncols) == rb


def same_span(a: Rows, b: Rows, ncols: int) -> bool:
    ra, rb = rank(a, ncols), rank(b, ncols)
    return ra == rb and rank(list(a) + list(b), ncols) == ra


def intersection(a: Rows, b: Rows, ncols: int) -> list[list[Fraction]]:
    """Basis of the intersection of two row spans."""
    a = row_basis(a, ncols)
    b = row_basis(b, ncols)
    if not a or not b:
        return []
    # solve x.A = y.B via the nullspace of [A; -B]^T
    stacked = [list(r) for r in a] + [[-c for c in r] for r in b]
    cols = [[stacked[i][j] for i in range(len(stacked))] for j in range(ncols)]
    sols = nullspace(cols, len(stacked))
    out = []
    for s in sols:
        v = [sum((s[i] * a[i][j] for i in range(len(a))), Fraction(0)) for j in range(ncols)]
        out.append(v)
    return row_basis(out, ncols)


def solve(span: Rows, vec: Sequence[Fraction], ncols: int) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i span_i = vec``, or None."""
    n = len(span)
    if n == 0:
        return [] if not any(vec) else None
    cols = [[span[i][j] for i in range(n)] + [-vec[j]] for j in range(ncols)]
    for s in nullspace(cols, n + 1):
        if s[n]:
            return [c / s[n] for c in s[:n]]
    return None


def complete_basis(rows: Rows, ncols: int) -> list[list[Fraction]]:
    """Standard basis vectors completing an independent family to a basis."""
    out = [list(r) for r in rows]
    for j in range(ncols):
        e = [Fraction(int(i == j)) for i in range(ncols)]
        if rank(out + [e], ncols) > len(out):
            out.append(e)
    return out[len(rows):]


def inverse(rows: Rows) -> list[list[Fraction]]:
    n = len(rows)
    inv = _dm(rows, n).inv().to_list()
    return [[_frac(c) for c in row] for row in inv]
