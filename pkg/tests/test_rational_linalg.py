from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from prym_hurwitz.rational_linalg import RationalMatrix, RowOp, SolveStatus, rank, rref, solve_unique

entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def _sym(m: RationalMatrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m.rows])


def _from_sym(s: sympy.Matrix) -> RationalMatrix:
    return RationalMatrix([[Fraction(int(x.p), int(x.q)) for x in s.row(i)] for i in range(s.rows)], s.cols)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_matches_sympy(rows):
    m = RationalMatrix(rows)
    red = rref(m)
    ref, piv = _sym(m).rref()
    assert red.matrix == _from_sym(ref)
    assert red.pivots == tuple(piv)
    assert red.rank == _sym(m).rank()


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_recorded_ops_reproduce_rref(rows):
    m = RationalMatrix(rows)
    red = rref(m)
    assert red.transform() @ m == red.matrix


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(entries, min_size=n, max_size=n),
)))
def test_solve_against_sympy(data):
    rows, b = data
    a = RationalMatrix(rows)
    sol = solve_unique(a, b)
    sa = _sym(a)
    if sa.rank() == a.ncols:
        assert sol.status is SolveStatus.UNIQUE
        expected = sa.LUsolve(sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in b]))
        assert sol.x == tuple(Fraction(int(v.p), int(v.q)) for v in expected)
        assert a @ sol.x == tuple(b)
    else:
        assert sol.status is not SolveStatus.UNIQUE


def test_overdetermined_consistent_and_inconsistent():
    a = RationalMatrix([[1, 0], [0, 1], [1, 1]])
    ok = solve_unique(a, [1, 2, 3])
    assert ok.ok and ok.x == (1, 2) and ok.rank == ok.augmented_rank == 2
    bad = solve_unique(a, [1, 2, 4])
    assert bad.status is SolveStatus.INCONSISTENT
    assert bad.inconsistent_row == 2 and bad.augmented_rank == 3


def test_underdetermined():
    sol = solve_unique(RationalMatrix([[1, 1], [2, 2]]), [1, 2])
    assert sol.status is SolveStatus.UNDERDETERMINED and sol.x is None


def test_matrix_basics():
    m = RationalMatrix([[1, Fraction(1, 2)], [3, 4]])
    assert m.shape == (2, 2)
    assert m[0, 1] == Fraction(1, 2)
    assert m.column(0) == (1, 3)
    assert RationalMatrix.identity(2) @ m == m
    assert RationalMatrix.zeros(2, 3).shape == (2, 3)
    assert m.augment([5, 6]).row(1) == (3, 4, 6)
    assert rank(m) == 2
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2], [3]])
    with pytest.raises(ValueError):
        m @ RationalMatrix.identity(3)
    with pytest.raises(ValueError):
        m @ [1, 2, 3]
    with pytest.raises(ValueError):
        solve_unique(m, [1])


def test_rowop_matrices():
    assert RowOp("swap", 0, 1).as_matrix(2).rows == ((0, 1), (1, 0))
    assert RowOp("scale", 1, factor=Fraction(3)).as_matrix(2).rows == ((1, 0), (0, 3))
    assert RowOp("add", 1, 0, Fraction(-2)).as_matrix(2).rows == ((1, 0), (-2, 1))
