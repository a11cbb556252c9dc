from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prym_hurwitz import expr


def test_integers_stay_integers():
    v = expr.evaluate("(2*i+2)*binom(2*i-1, i)", {"i": 3})
    assert v == 80 and isinstance(v, int)


def test_division_is_exact():
    assert expr.evaluate("7/2") == Fraction(7, 2)
    assert expr.evaluate_exact("Fraction(1, 3) + 1/6") == Fraction(1, 2)


def test_generator_sum_and_conditions():
    v = expr.evaluate("sum((i-s)*binom(2*i, s) for s in range(0, i))", {"i": 4})
    assert v == sum((4 - s) * __import__("math").comb(8, s) for s in range(4))
    assert expr.evaluate("k >= 1 and (m + n) % 2 == 0", {"k": 1, "m": 3, "n": 1}) is True
    assert expr.evaluate("1 if k > 2 else 0", {"k": 2}) == 0


def test_binom_zero_outside_range():
    assert expr.binom(3, 5) == 0
    assert expr.binom(3, -1) == 0


@pytest.mark.parametrize(
    "text",
    ["__import__('os')", "x.real", "[1, 2][0]", "open('f')", "1.5", "lambda: 1", "[s for s in range(3)]"],
)
def test_rejects_outside_whitelist(text):
    with pytest.raises(expr.ExprError):
        expr.evaluate(text, {"x": 1})


def test_unknown_name():
    with pytest.raises(expr.ExprError):
        expr.evaluate("q + 1", {})


def test_as_int():
    assert expr.as_int(Fraction(4, 2)) == 2
    with pytest.raises(ValueError):
        expr.as_int(Fraction(1, 2))


@given(st.integers(-50, 50), st.integers(1, 50))
def test_matches_python_fraction_arithmetic(a, b):
    env = {"a": a, "b": b}
    assert expr.evaluate("a/b - a*b + a**2", env) == Fraction(a, b) - a * b + a**2
