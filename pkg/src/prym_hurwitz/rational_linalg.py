"""Dense exact linear algebra over the rationals.

``fractions.Fraction`` already provides normalized arbitrary-precision
rationals (positive denominator, reduced), so it is used directly as the
scalar type. Matrices are small (at most 8x8 in this package) and stored as
tuples of tuples.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

BigRational = Fraction


class RationalMatrix:
    """Immutable rectangular matrix of Fractions."""

    __slots__ = ("_rows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        widths = {len(r) for r in data}
        if len(widths) > 1:
            raise ValueError(f"ragged rows: widths {sorted(widths)}")
        if data:
            ncols = widths.pop()
        elif ncols is None:
            ncols = 0
        self._rows = data
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> RationalMatrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ncols, self._rows))

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = [other.column(j) for j in range(other.ncols)]
            return RationalMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows], other.ncols
            )
        vec = [Fraction(x) for x in other]
        if len(vec) != self.ncols:
            raise ValueError(f"vector of length {len(vec)} does not match {self.ncols} columns")
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self._rows)

    def augment(self, column: Sequence) -> RationalMatrix:
        if len(column) != self.nrows:
            raise ValueError("column length does not match row count")
        return RationalMatrix([r + (Fraction(c),) for r, c in zip(self._rows, column)], self.ncols + 1)

    def __repr__(self) -> str:
        return f"RationalMatrix({[[str(x) for x in r] for r in self._rows]})"


@dataclass(frozen=True)
class RowOp:
    """An elementary row operation: swap, scale, or add ``factor`` times ``src`` to ``dst``."""

    kind: str
    dst: int
    src: int = -1
    factor: Fraction = Fraction(1)

    def as_matrix(self, n: int) -> RationalMatrix:
        m = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        if self.kind == "swap":
            m[self.dst], m[self.src] = m[self.src], m[self.dst]
        elif self.kind == "scale":
            m[self.dst][self.dst] = self.factor
        else:
            m[self.dst][self.src] = self.factor
        return RationalMatrix(m, n)


@dataclass(frozen=True)
class RREF:
    matrix: RationalMatrix
    rank: int
    pivots: tuple[int, ...]
    ops: tuple[RowOp, ...] = field(default=(), repr=False)

    def transform(self) -> RationalMatrix:
        """The product ``E`` of recorded elementary matrices, so ``E @ M == R``."""
        n = self.matrix.nrows
        e = RationalMatrix.identity(n)
        for op in self.ops:
            e = op.as_matrix(n) @ e
        return e


def rref(m: RationalMatrix) -> RREF:
    """Reduced row echelon form by Gauss-Jordan elimination, recording every operation."""
    a = [list(r) for r in m.rows]
    nrows, ncols = m.shape
    ops: list[RowOp] = []
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            ops.append(RowOp("swap", r, p))
        inv = 1 / a[r][c]
        if inv != 1:
            a[r] = [x * inv for x in a[r]]
            ops.append(RowOp("scale", r, factor=inv))
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = -a[i][c]
                a[i] = [x + f * y for x, y in zip(a[i], a[r])]
                ops.append(RowOp("add", i, r, f))
        pivots.append(c)
        r += 1
    return RREF(RationalMatrix(a, ncols), len(pivots), tuple(pivots), tuple(ops))


def rank(m: RationalMatrix) -> int:
    return rref(m).rank


class SolveStatus(enum.Enum):
    UNIQUE = "unique"
    INCONSISTENT = "inconsistent"
    UNDERDETERMINED = "underdetermined"


@dataclass(frozen=True)
class Solution:
    status: SolveStatus
    x: tuple[Fraction, ...] | None
    rank: int
    augmented_rank: int
    inconsistent_row: int | None = None

    @property
    def ok(self) -> bool:
        return self.status is SolveStatus.UNIQUE


def solve_unique(a: RationalMatrix, b: Sequence) -> Solution:
    """The unique ``x`` with ``a @ x == b``, or a status saying why there is none.

    On inconsistency, ``inconsistent_row`` is the first equation that cannot
    hold together with the equations before it.
    """
    b = [Fraction(v) for v in b]
    if len(b) != a.nrows:
        raise ValueError("right-hand side length does not match row count")
    ra = rref(a).rank
    red = rref(a.augment(b))
    if red.rank != ra:
        return Solution(SolveStatus.INCONSISTENT, None, ra, red.rank, _first_violated(a, b))
    if ra < a.ncols:
        return Solution(SolveStatus.UNDERDETERMINED, None, ra, red.rank)
    x = [Fraction(0)] * a.ncols
    for row, col in enumerate(red.pivots):
        x[col] = red.matrix[row, a.ncols]
    return Solution(SolveStatus.UNIQUE, tuple(x), ra, red.rank)


def _first_violated(a: RationalMatrix, b: list[Fraction]) -> int | None:
    """Smallest ``k`` such that equations ``0..k`` are jointly inconsistent."""
    for k in range(1, a.nrows + 1):
        sub = RationalMatrix(a.rows[:k], a.ncols)
        if rref(sub.augment(b[:k])).rank != rref(sub).rank:
            return k - 1
    return None
