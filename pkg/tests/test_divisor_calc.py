from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy

from prym_hurwitz import divisor_calc as dc
from prym_hurwitz.divisor_calc import LAMBDA, BasisClass

I_RANGE = range(2, 13)


def test_basis_layout():
    b = dc.basis(6)
    assert b[:4] == (LAMBDA, dc.DELTA0P, dc.DELTA0PP, dc.DELTA0RAM)
    assert len(b) == 4 + 3 * 3 - 1  # delta_3 appears once
    assert BasisClass("pair", 2).label(6) == "delta_{2:4}"


def test_parse_tag():
    assert dc.parse_tag("delta_{g-1}", 8) == BasisClass("delta", 7)
    assert dc.parse_tag("delta_{g-1:1}", 8) == BasisClass("pair", 1)
    assert dc.parse_tag("delta_{j:g-j}", 8, {"j": 3}) == BasisClass("pair", 3)
    for bad in ("delta_{g}", "delta_{2:3}", "mu"):
        with pytest.raises(ValueError):
            dc.parse_tag(bad, 8)


def test_divisor_class_unknowns_default():
    d = dc.DivisorClass(4, {LAMBDA: Fraction(3)})
    assert d[dc.DELTA0P] is dc.UNKNOWN
    assert d.known() == {LAMBDA: 3}
    js = d.to_json()
    assert list(js)[0] == "lambda" and js["delta0'"] is None
    with pytest.raises(ValueError):
        dc.DivisorClass(4, {BasisClass("delta", 9): Fraction(1)})


def test_test_curve_vectors():
    a = dc.test_curve_vector(8, "A_1")
    assert a.dot(LAMBDA) == 3 and a.dot(BasisClass("delta", 1)) == -3
    c = dc.test_curve_vector(8, "C^{g-1}_{1}")
    assert c.as_dict() == {BasisClass("delta", 1): 2 - 2 * 7}
    with pytest.raises(ValueError):
        dc.test_curve_vector(3, "A_1")


@pytest.mark.parametrize("i", I_RANGE)
def test_system_rank_and_solution(i):
    system, sol = dc.solve_system(i)
    assert system.matrix.shape == (8, 7)
    assert sol.ok and sol.rank == 7 and sol.augmented_rank == 7
    assert system.matrix @ sol.x == system.rhs


@pytest.mark.parametrize("i", I_RANGE)
def test_solution_against_sympy_least_squares_free_solve(i):
    """sympy solves the same 8x7 system independently."""
    system, sol = dc.solve_system(i)
    a = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in system.matrix.rows])
    b = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in system.rhs])
    (x, params) = a.gauss_jordan_solve(b)
    assert params.shape[0] == 0
    assert tuple(Fraction(int(v.p), int(v.q)) for v in x) == sol.x


@pytest.mark.parametrize("i", I_RANGE)
def test_coefficients_positive_integers_and_closed_forms(i):
    rep = dc.solve_coefficients(i)
    assert rep.closed_form_match
    assert all(v > 0 and v.denominator == 1 for v in rep.values.values())
    assert not any(rep.residuals)
    assert all(r.match for r in rep.row_checks)


def test_i2_solution():
    rep = dc.solve_coefficients(2)
    assert [int(rep.values[u]) for u in dc.UNKNOWNS] == [66, 8, 12, 13, 36, 30, 18]
    js = rep.to_json()
    assert js["system_rank"] == 7 and js["closed_form_match"]
    assert js["coefficients"]["a"] == {"num": 66, "den": 1, "text": "66"}
    # the divisor keeps signs: +a on lambda, -b on boundary classes
    assert rep.divisor[LAMBDA] == 66 and rep.divisor[dc.DELTA0P] == -8
    assert rep.divisor[BasisClass("delta", 2)] is dc.UNKNOWN
    assert rep.divisor[BasisClass("pair", 2)] is dc.UNKNOWN


def test_even_closed_forms_by_hand():
    i = 3
    c = math.comb(5, 3)
    forms = dc.even_closed_forms(i)
    assert forms["a"] == Fraction(12 * 9 + 30 - 2, 5) * c == 272
    assert forms["b_{1:g-1}"] == 8 * c


def test_hand_row_scales_at_i2():
    system = dc.assemble_system(2)
    scales = [r.scale for r in dc.compare_hand_rows(system)]
    assert scales == [Fraction(1, 3), 1, Fraction(1, 3), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), Fraction(1, 63), 1]


@pytest.mark.parametrize("curve", dc.SYSTEM_CURVES)
def test_case_breakdowns_sum_to_intersections(curve):
    for i in I_RANGE:
        b = dc.dmu_breakdown(i, curve)
        assert b.anchor
        if b.cases:
            assert b.case_total == b.value


def test_intersection_errors():
    with pytest.raises(KeyError):
        dc.dmu_intersection(3, "Z")
    with pytest.raises(ValueError):
        dc.dmu_intersection(1, "A_1")


def test_odd_genus_literals():
    assert dc.odd_genus_values(2) == {"a": 14, "b0'": 2, "b0''": 8, "b0ram": Fraction(5, 2)}
    assert dc.odd_genus_values(3) == {"a": 40, "b0'": 6, "b0''": 36, "b0ram": 7}
    div = dc.odd_genus_coefficients(2)
    assert div.g == 5 and div[LAMBDA] == 14 and div[dc.DELTA0RAM] == Fraction(-5, 2)
    with pytest.raises(ValueError):
        dc.odd_genus_coefficients(1)


@pytest.mark.parametrize("i", range(2, 11))
def test_odd_genus_direct_evaluation(i):
    c = Fraction(math.comb(2 * i, i), 2 * i - 1)
    assert dc.odd_genus_values(i) == {
        "a": c * (3 * i + 1),
        "b0'": c * Fraction(i, 2),
        "b0''": c * i * i,
        "b0ram": c * Fraction(2 * i + 1, 4),
    }


def test_forgetful_degree():
    assert dc.forgetful_degree(2) == 1512
    assert dc.forgetful_degree(3) == 736560
    vals = [dc.forgetful_degree(i) for i in range(2, 12)]
    assert vals == sorted(vals) and len(set(vals)) == len(vals)
    for i in range(2, 11):
        assert dc.forgetful_crosscheck(i).match
