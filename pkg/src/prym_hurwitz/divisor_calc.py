"""Divisor classes on the Prym moduli space and the test-curve system.

The class of the Hurwitz divisor in even genus ``g = 2i`` is written as
``a*lambda - b0'*delta0' - b0''*delta0'' - b0ram*delta0ram - b1*delta1 - ...``.
Pairing it with eight test curves gives eight linear equations in seven
unknown coefficients. Each equation is built here from two independent
inputs: the curve's intersection vector against the basis, and the
intersection number of the divisor with the curve (normalized by the
factorial of the number of simple branch points). The system is then solved
exactly and compared with closed forms.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Mapping

from . import expr
from .rational_linalg import RationalMatrix, Solution, SolveStatus, solve_unique

UNKNOWN = None  # coefficient the computation does not determine


class SystemError_(ArithmeticError):
    """The test-curve system is inconsistent or rank deficient."""


@lru_cache(maxsize=None)
def _data() -> dict:
    return json.loads(resources.files("prym_hurwitz").joinpath("data").joinpath("divisor.json").read_text())


# -- basis ------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class BasisClass:
    """A generator of the rational Picard group.

    ``kind`` is one of ``lambda``, ``delta0'``, ``delta0''``, ``delta0ram``,
    ``delta`` (boundary ``delta_j`` with ``1 <= j <= g-1``) or ``pair``
    (``delta_{j:g-j}`` with ``j <= g/2``).
    """

    kind: str
    j: int = 0

    def __str__(self) -> str:
        if self.kind == "delta":
            return f"delta_{self.j}"
        if self.kind == "pair":
            return f"delta_{{{self.j}:g-{self.j}}}"
        return self.kind

    def label(self, g: int) -> str:
        if self.kind == "pair":
            return f"delta_{{{self.j}:{g - self.j}}}"
        return str(self)


LAMBDA = BasisClass("lambda")
DELTA0P = BasisClass("delta0'")
DELTA0PP = BasisClass("delta0''")
DELTA0RAM = BasisClass("delta0ram")


def basis(g: int) -> tuple[BasisClass, ...]:
    """``lambda, delta0', delta0'', delta0ram`` then ``delta_j, delta_{g-j}, delta_{j:g-j}`` for ``j <= g/2``."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    out = [LAMBDA, DELTA0P, DELTA0PP, DELTA0RAM]
    for j in range(1, g // 2 + 1):
        out.append(BasisClass("delta", j))
        if g - j != j:
            out.append(BasisClass("delta", g - j))
        out.append(BasisClass("pair", j))
    return tuple(out)


_TAG = re.compile(r"^delta_\{(?P<a>[^:{}]+)(?::(?P<b>[^:{}]+))?\}$")


def parse_tag(tag: str, g: int, env: Mapping[str, int] | None = None) -> BasisClass:
    """Resolve tags like ``delta0'``, ``delta_{g-1}`` or ``delta_{j:g-j}`` for genus ``g``."""
    if tag in ("lambda", "delta0'", "delta0''", "delta0ram"):
        return BasisClass(tag)
    m = _TAG.match(tag.replace(" ", ""))
    if not m:
        raise ValueError(f"unrecognized basis tag {tag!r}")
    scope = {"g": g, **(env or {})}
    a = expr.as_int(expr.evaluate(m["a"], scope))
    if m["b"] is None:
        if not 1 <= a <= g - 1:
            raise ValueError(f"delta index {a} outside 1..{g - 1}")
        return BasisClass("delta", a)
    b = expr.as_int(expr.evaluate(m["b"], scope))
    if a + b != g or min(a, b) < 1:
        raise ValueError(f"pair index {a}:{b} is not a splitting of g={g}")
    return BasisClass("pair", min(a, b))


@dataclass
class DivisorClass:
    """Coefficients on the basis; classes the computation does not reach stay ``UNKNOWN``."""

    g: int
    coefficients: dict[BasisClass, Fraction | None] = field(default_factory=dict)

    def __post_init__(self):
        valid = set(basis(self.g))
        bad = [c for c in self.coefficients if c not in valid]
        if bad:
            raise ValueError(f"classes {bad} are not in the basis for g={self.g}")
        for c in basis(self.g):
            self.coefficients.setdefault(c, UNKNOWN)

    def __getitem__(self, c: BasisClass) -> Fraction | None:
        return self.coefficients[c]

    def known(self) -> dict[BasisClass, Fraction]:
        return {c: v for c, v in self.coefficients.items() if v is not UNKNOWN}

    def to_json(self) -> dict:
        return {
            c.label(self.g): (None if self.coefficients[c] is UNKNOWN else _frac_json(self.coefficients[c]))
            for c in basis(self.g)
        }


def _frac_json(v: Fraction) -> dict:
    return {"num": v.numerator, "den": v.denominator, "text": str(v)}


# -- test curves ------------------------------------------------------------------


@dataclass(frozen=True)
class TestCurve:
    name: str
    g: int
    vector: tuple[tuple[BasisClass, Fraction], ...]
    anchor: str

    __test__ = False  # not a pytest class

    def dot(self, c: BasisClass) -> Fraction:
        return dict(self.vector).get(c, Fraction(0))

    def as_dict(self) -> dict[BasisClass, Fraction]:
        return dict(self.vector)


_CURVE = re.compile(r"^C\^\{?(?P<j>[^}_]+)\}?_\{?(?P<k>[^}]+)\}?$")


def _resolve_curve(name: str, g: int) -> tuple[str, dict[str, int]]:
    """Map a concrete curve name onto a table key plus parameter bindings."""
    table = _data()["test_curves"]
    if name in table and not name.startswith("C^"):
        return name, {}
    m = _CURVE.match(name.replace(" ", ""))
    if not m:
        raise KeyError(f"unknown test curve {name!r}")
    scope = {"g": g}
    j = expr.as_int(expr.evaluate(m["j"], scope))
    if not 2 <= j <= g - 1:
        raise ValueError(f"C-curves need 2 <= j <= g-1, got j={j}")
    k = m["k"]
    if ":" in k:
        lo, hi = (expr.as_int(expr.evaluate(t, scope)) for t in k.split(":"))
        if {lo, hi} != {j, g - j}:
            raise KeyError(f"{name}: pair subscript must be {j}:{g - j}")
        return "C^{j}_{j:g-j}", {"j": j}
    kv = expr.as_int(expr.evaluate(k, scope))
    if kv == j:
        return "C^{j}_{j}", {"j": j}
    if kv == g - j:
        return "C^{j}_{g-j}", {"j": j}
    raise KeyError(f"{name}: subscript must be {j} or {g - j}")


def test_curve_vector(g: int, name: str) -> TestCurve:
    """Intersection numbers of the named test curve with every basis class (absent ones are 0)."""
    if g < 4:
        raise ValueError("test-curve tables are stated for g >= 4")
    key, env = _resolve_curve(name, g)
    entry = _data()["test_curves"][key]
    scope = {"g": g, **env}
    vec = {}
    for tag, value in entry["entries"].items():
        vec[parse_tag(tag, g, env)] = expr.evaluate_exact(value, scope)
    ordered = tuple((c, vec[c]) for c in basis(g) if c in vec)
    return TestCurve(name, g, ordered, entry["anchor"])


test_curve_vector.__test__ = False  # type: ignore[attr-defined]


# -- intersection numbers ---------------------------------------------------------


SYSTEM_CURVES: tuple[str, ...] = tuple(_data()["system_curves"])
UNKNOWNS: tuple[str, ...] = tuple(u for u, _ in _data()["unknowns"])


@dataclass(frozen=True)
class CaseTerm:
    label: str
    count: Fraction
    multiplicity: Fraction

    @property
    def contribution(self) -> Fraction:
        return self.count * self.multiplicity


@dataclass(frozen=True)
class DmuIntersection:
    curve: str
    i: int
    value: Fraction
    anchor: str
    cases: tuple[CaseTerm, ...] = ()

    @property
    def case_total(self) -> Fraction | None:
        if not self.cases:
            return None
        return sum((c.contribution for c in self.cases), Fraction(0))


def _intersection_entry(curve: str) -> dict:
    table = _data()["intersections"]
    if curve not in table:
        raise KeyError(f"unknown curve {curve!r}; expected one of {sorted(table)}")
    return table[curve]


def dmu_intersection(i: int, curve: str) -> Fraction:
    """Intersection of the divisor with ``curve`` divided by ``(3g-3)!``."""
    if i < 2:
        raise ValueError("i must be at least 2")
    value = expr.evaluate_exact(_intersection_entry(curve)["value"], {"i": i})
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral intersection {value} for {curve} at i={i}")
    return value


def dmu_breakdown(i: int, curve: str) -> DmuIntersection:
    """The intersection together with its case-by-case count x multiplicity terms."""
    entry = _intersection_entry(curve)
    env = {"i": i}
    cases = tuple(
        CaseTerm(c["label"], expr.evaluate_exact(c["count"], env), expr.evaluate_exact(c["multiplicity"], env))
        for c in entry["cases"]
    )
    return DmuIntersection(curve, i, dmu_intersection(i, curve), entry["anchor"], cases)


# -- the system -------------------------------------------------------------------


@dataclass(frozen=True)
class System:
    i: int
    curves: tuple[str, ...]
    matrix: RationalMatrix
    rhs: tuple[Fraction, ...]

    @property
    def g(self) -> int:
        return 2 * self.i


def _unknown_classes(g: int) -> list[BasisClass]:
    return [parse_tag(tag, g) for _, tag in _data()["unknowns"]]


def assemble_system(i: int) -> System:
    """Row per curve: ``(T.lambda) a - sum_X (T.delta_X) b_X = D.T / (3g-3)!``.

    Every curve in the system meets only the seven classes carrying unknowns;
    anything else would leave an undetermined coefficient in the row.
    """
    g = 2 * i
    classes = _unknown_classes(g)
    rows, rhs = [], []
    for name in SYSTEM_CURVES:
        tc = test_curve_vector(g, name)
        stray = [c for c in tc.as_dict() if c not in classes]
        if stray:
            raise SystemError_(f"{name} meets classes outside the unknowns: {stray}")
        rows.append([tc.dot(c) if c == LAMBDA else -tc.dot(c) for c in classes])
        rhs.append(dmu_intersection(i, name))
    return System(i, SYSTEM_CURVES, RationalMatrix(rows), tuple(rhs))


@dataclass(frozen=True)
class RowCheck:
    curve: str
    scale: Fraction | None
    anchor: str

    @property
    def match(self) -> bool:
        return self.scale is not None and self.scale > 0


def hand_row(i: int, curve: str) -> tuple[tuple[Fraction, ...], Fraction, str]:
    entry = _data()["hand_rows"][curve]
    env = {"i": i}
    coeffs = tuple(
        expr.evaluate_exact(entry["coefficients"].get(u, "0"), env) for u in UNKNOWNS
    )
    return coeffs, expr.evaluate_exact(entry["rhs"], env), entry["anchor"]


def compare_hand_rows(system: System) -> list[RowCheck]:
    """For each structural row, the positive scale taking it to the hand-normalized row (or None)."""
    out = []
    for k, curve in enumerate(system.curves):
        coeffs, rhs, anchor = hand_row(system.i, curve)
        ours = system.matrix.row(k) + (system.rhs[k],)
        theirs = coeffs + (rhs,)
        out.append(RowCheck(curve, _proportional(ours, theirs), anchor))
    return out


def _proportional(u: tuple[Fraction, ...], v: tuple[Fraction, ...]) -> Fraction | None:
    """``t`` with ``v == t*u`` if it exists."""
    pivot = next((k for k, x in enumerate(u) if x != 0), None)
    if pivot is None:
        return None
    t = v[pivot] / u[pivot]
    return t if all(t * a == b for a, b in zip(u, v)) else None


# -- solving and closed forms -------------------------------------------------------


def even_closed_forms(i: int) -> dict[str, Fraction]:
    env = {"i": i}
    return {u: expr.evaluate_exact(e["expr"], env) for u, e in _data()["even_closed_forms"].items()}


@dataclass(frozen=True)
class SolveReport:
    i: int
    divisor: DivisorClass
    values: dict[str, Fraction]
    closed_forms: dict[str, Fraction]
    rank: int
    residuals: tuple[Fraction, ...]
    row_checks: tuple[RowCheck, ...]

    @property
    def closed_form_match(self) -> bool:
        return self.values == self.closed_forms

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "g": 2 * self.i,
            "coefficients": {k: _frac_json(v) for k, v in self.values.items()},
            "closed_forms": {k: _frac_json(v) for k, v in self.closed_forms.items()},
            "closed_form_match": self.closed_form_match,
            "system_rank": self.rank,
            "hand_rows_match": all(r.match for r in self.row_checks),
            "divisor": self.divisor.to_json(),
        }


def solve_system(i: int) -> tuple[System, Solution]:
    system = assemble_system(i)
    return system, solve_unique(system.matrix, system.rhs)


def solve_coefficients(i: int) -> SolveReport:
    """Solve the even-genus system at ``g = 2i``; any inconsistency or rank loss is fatal."""
    system, sol = solve_system(i)
    if sol.status is SolveStatus.INCONSISTENT:
        bad = system.curves[sol.inconsistent_row] if sol.inconsistent_row is not None else "?"
        raise SystemError_(f"i={i}: inconsistent system, first failing equation from {bad}")
    if sol.status is SolveStatus.UNDERDETERMINED:
        raise SystemError_(f"i={i}: rank {sol.rank} < {len(UNKNOWNS)}")
    values = dict(zip(UNKNOWNS, sol.x))
    residuals = tuple(a - b for a, b in zip(system.matrix @ sol.x, system.rhs))
    if any(residuals):
        raise SystemError_(f"i={i}: nonzero residuals {residuals}")
    g = 2 * i
    classes = _unknown_classes(g)
    coeffs: dict[BasisClass, Fraction | None] = {}
    for u, c, v in zip(UNKNOWNS, classes, sol.x):
        coeffs[c] = v if c == LAMBDA else -v
    report = SolveReport(
        i,
        DivisorClass(g, coeffs),
        values,
        even_closed_forms(i),
        sol.rank,
        residuals,
        tuple(compare_hand_rows(system)),
    )
    if not report.closed_form_match:
        diff = {k: (values[k], report.closed_forms[k]) for k in values if values[k] != report.closed_forms[k]}
        raise SystemError_(f"i={i}: solution differs from closed forms at {diff}")
    return report


def odd_genus_coefficients(i: int) -> DivisorClass:
    """The four closed-form coefficients in genus ``2i+1``; no system is solved.

    Values are exact rationals. ``b0ram`` is a genuine half-integer for some
    ``i`` (``5/2`` at ``i = 2``), so integrality is not imposed.
    """
    if i < 2:
        raise ValueError("i must be at least 2")
    g = 2 * i + 1
    env = {"i": i}
    tags = dict(_data()["unknowns"])
    coeffs: dict[BasisClass, Fraction | None] = {}
    for u, e in _data()["odd_closed_forms"].items():
        c = parse_tag(tags[u], g)
        v = expr.evaluate_exact(e["expr"], env)
        coeffs[c] = v if c == LAMBDA else -v
    return DivisorClass(g, coeffs)


def odd_genus_values(i: int) -> dict[str, Fraction]:
    div = odd_genus_coefficients(i)
    tags = dict(_data()["unknowns"])
    out = {}
    for u in _data()["odd_closed_forms"]:
        c = parse_tag(tags[u], 2 * i + 1)
        v = div[c]
        out[u] = v if c == LAMBDA else -v
    return out


def forgetful_degree(i: int) -> int:
    """``(2i)! * (2^(4i-2) - 1)``."""
    if i < 2:
        raise ValueError("i must be at least 2")
    return math.factorial(2 * i) * (2 ** (4 * i - 2) - 1)


@dataclass(frozen=True)
class ForgetfulCheck:
    i: int
    degree: int
    bram_intersection: Fraction
    ratio_from_degree: Fraction
    ratio_from_intersection: Fraction

    @property
    def match(self) -> bool:
        return self.ratio_from_degree == self.ratio_from_intersection


def forgetful_crosscheck(i: int) -> ForgetfulCheck:
    """Compare the degree with the normalized ``B0ram`` intersection, read with ``g = 2i+1``.

    Both share the factor ``2^(4i-2) - 1``: the degree divided by ``(2i)!``
    must equal the intersection divided by ``2*C(2i, i)``.
    """
    g = 2 * i + 1
    entry = _data()["odd_bram_intersection"]
    inter = expr.evaluate_exact(entry["expr"], {"i": i, "g": g})
    deg = forgetful_degree(i)
    return ForgetfulCheck(
        i,
        deg,
        inter,
        Fraction(deg, math.factorial(2 * i)),
        inter / (2 * math.comb(2 * i, i)),
    )
