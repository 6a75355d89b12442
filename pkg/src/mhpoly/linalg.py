"""Exact row reduction over the rationals.

Vectors are plain lists of Fractions. Only what the minimal model builder
needs is here: echelon bases, rank, nullspace and reduction modulo a span.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = list[Fraction]


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis of a subspace.

    ``reduce`` returns the remainder of a vector modulo the span; the
    remainder is zero exactly when the vector lies in the span.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[Vector] = []
        self.pivots: list[int] = []

    def reduce(self, vec: Sequence[Fraction]) -> Vector:
        out = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = out[p]
            if c:
                for j in range(p, self.dim):
                    if row[j]:
                        out[j] -= c * row[j]
        return out

    def add(self, vec: Sequence[Fraction]) -> bool:
        """Insert ``vec``; returns False if it was already in the span."""
        if len(vec) != self.dim:
            raise ValueError(f"vector of length {len(vec)} in a space of dimension {self.dim}")
        r = self.reduce(vec)
        p = next((j for j, x in enumerate(r) if x), None)
        if p is None:
            return False
        inv = 1 / r[p]
        r = [x * inv for x in r]
        # keep rows fully reduced so reduce() needs one pass
        for i, row in enumerate(self.rows):
            c = row[p]
            if c:
                self.rows[i] = [x - c * y for x, y in zip(row, r)]
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < p:
            pos += 1
        self.rows.insert(pos, r)
        self.pivots.insert(pos, p)
        return True

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return not any(self.reduce(vec))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def free_columns(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.dim) if j not in piv]


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    basis = EchelonBasis(len(rows[0]) if ncols is None else ncols)
    for r in rows:
        basis.add([Fraction(x) for x in r])
    return basis.rank


def nullspace(matrix: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis of {x : matrix @ x = 0} for a matrix with ``ncols`` columns.

    One basis vector per free column, with a 1 in that column (the usual
    RREF parametrisation), so the output is deterministic.
    """
    basis = EchelonBasis(ncols)
    for r in matrix:
        basis.add([Fraction(x) for x in r])
    out = []
    for f in basis.free_columns():
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(basis.rows, basis.pivots):
            x[p] = -row[f]
        out.append(x)
    return out


def transpose(matrix: Sequence[Sequence[Fraction]], nrows: int, ncols: int) -> list[Vector]:
    """``matrix`` is nrows x ncols; returns its ncols x nrows transpose."""
    if nrows == 0:
        return [[] for _ in range(ncols)]
    return [[matrix[i][j] for i in range(nrows)] for j in range(ncols)]
