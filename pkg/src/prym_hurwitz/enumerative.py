"""Closed-form counts and the identities that connect them.

Three independent pieces live here:

* the pointed Brill-Noether count ``N_{alpha,beta}`` for maps from a general
  curve to the line with prescribed ramification in one fibre, plus a data
  catalog of the specializations that feed the divisor computation;
* the binomial sums ``S_k`` and ``T_k`` and a catalog of weighted sums, each
  evaluated both naively and by closed form;
* polynomial Pell pairs, obtained as powers of a unit in ``Z[X][y]/(y^2 - X(X-1))``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

from . import expr

PELL_BOUND = 40


class HypothesisError(ValueError):
    """A Brill-Noether query violates one of the count's hypotheses."""


@dataclass(frozen=True)
class BNQuery:
    """Maps of degree ``d`` from a general genus-``g`` curve.

    ``alphas`` are orders at moving points, ``betas`` orders at fixed general
    points, all in a single fibre. ``relax_degree`` admits ``d = g + 1``,
    where the formula is still meaningful for ``m = 0``.
    """

    g: int
    d: int
    alphas: tuple[int, ...] = ()
    betas: tuple[int, ...] = ()
    relax_degree: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "betas", tuple(self.betas))
        if any(a < 1 for a in self.alphas) or any(b < 1 for b in self.betas):
            raise HypothesisError("ramification orders must be positive")
        limit = self.g + 1 if self.relax_degree else self.g
        if self.d > limit:
            raise HypothesisError(f"d <= {'g + 1' if self.relax_degree else 'g'} fails: d={self.d}, g={self.g}")
        if self.g + 1 - self.d - self.m < 0:
            raise HypothesisError(f"g + 1 - d - m >= 0 fails: {self.g + 1 - self.d - self.m}")
        want = 2 * self.d + self.m - 1 - self.g
        if sum(self.alphas) + sum(self.betas) != want:
            raise HypothesisError(
                f"sum of orders is {sum(self.alphas) + sum(self.betas)}, expected 2d + m - 1 - g = {want}"
            )

    @property
    def m(self) -> int:
        return len(self.alphas)


def bn_count(q: BNQuery) -> int:
    """``g!/(d!(g+1-d-m)!) * (2d+m-g-1 - sum 1/alpha) * prod alpha^2``, exactly."""
    prefactor = Fraction(math.factorial(q.g), math.factorial(q.d) * math.factorial(q.g + 1 - q.d - q.m))
    bracket = 2 * q.d + q.m - q.g - 1 - sum((Fraction(1, a) for a in q.alphas), Fraction(0))
    weight = math.prod(a * a for a in q.alphas)
    value = prefactor * bracket * weight
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral Brill-Noether count {value} for {q}")
    return int(value)


# -- specialization catalog ---------------------------------------------------


@dataclass(frozen=True)
class BNSpecialization:
    name: str
    g: str
    d: str
    alphas: tuple[str, ...]
    betas: tuple[str, ...]
    domain: str
    closed_form: str
    anchor: str
    relax_degree: bool = False

    def in_domain(self, i: int, s: int) -> bool:
        return bool(expr.evaluate(self.domain, {"i": i, "s": s}))

    def query(self, i: int, s: int) -> BNQuery:
        env = {"i": i, "s": s}
        ev = lambda t: expr.as_int(expr.evaluate(t, env))  # noqa: E731
        return BNQuery(
            g=ev(self.g),
            d=ev(self.d),
            alphas=tuple(ev(a) for a in self.alphas),
            # an order-0 condition at a fixed point is vacuous
            betas=tuple(b for b in map(ev, self.betas) if b != 0),
            relax_degree=self.relax_degree,
        )

    def quoted(self, i: int, s: int) -> Fraction:
        return expr.evaluate_exact(self.closed_form, {"i": i, "s": s})


def _load(name: str) -> dict:
    return json.loads(resources.files("prym_hurwitz").joinpath("data").joinpath(name).read_text())


@lru_cache(maxsize=None)
def bn_specializations() -> dict[str, BNSpecialization]:
    out = {}
    for e in _load("bn_specializations.json")["entries"]:
        out[e["name"]] = BNSpecialization(
            name=e["name"],
            g=e["g"],
            d=e["d"],
            alphas=tuple(e["alphas"]),
            betas=tuple(e["betas"]),
            domain=e["domain"],
            closed_form=e["closed_form"],
            anchor=e["anchor"],
            relax_degree=e.get("relax_degree", False),
        )
    return out


@dataclass(frozen=True)
class Comparison:
    name: str
    params: dict
    computed: Fraction
    expected: Fraction
    anchor: str
    note: str = ""

    @property
    def match(self) -> bool:
        return self.computed == self.expected

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "computed": str(self.computed),
            "expected": str(self.expected),
            "pass": self.match,
            "anchor": self.anchor,
            "note": self.note,
        }


def verify_bn_specialization(name: str, i: int, s: int) -> Comparison:
    """Compare ``bn_count`` at a cataloged specialization against its quoted form.

    Outside the entry's domain the data describes no maps, so the computed
    side is 0 and the quoted form is expected to vanish there too.
    """
    catalog = bn_specializations()
    if name not in catalog:
        raise KeyError(f"unknown specialization {name!r}; known: {sorted(catalog)}")
    if i < 2 or not 0 <= s <= i - 1:
        raise ValueError(f"need i >= 2 and 0 <= s <= i - 1, got i={i}, s={s}")
    entry = catalog[name]
    if entry.in_domain(i, s):
        computed, note = Fraction(bn_count(entry.query(i, s))), ""
    else:
        computed, note = Fraction(0), "degenerate: outside the data's domain"
    return Comparison(name, {"i": i, "s": s}, computed, entry.quoted(i, s), entry.anchor, note)


# -- binomial sums ----------------------------------------------------------------


def _pow(s: int, k: int) -> int:
    return 1 if k == 0 else s**k


def s_sum(i: int, k: int) -> int:
    """``sum_{s<i} s^k C(2i, s)``."""
    return sum(_pow(s, k) * math.comb(2 * i, s) for s in range(i))


def t_sum(i: int, k: int) -> int:
    """``sum_{s<i} s^k C(2i-1, s)``."""
    return sum(_pow(s, k) * math.comb(2 * i - 1, s) for s in range(i))


# P = 2^(2i-2), C = binom(2i-1, i)
_CLOSED_S = {
    0: "2*P - C",
    1: "2*i*P - 2*i*C",
    2: "i*(2*i + 1)*P - 3*i**2*C",
}
_CLOSED_T = {
    0: "P",
    1: "Fraction(2*i - 1, 2)*P - Fraction(i, 2)*C",
    2: "Fraction((2*i - 1)*i, 2)*(P - C)",
    3: "(i**3 - Fraction(3, 4)*i + Fraction(1, 4))*P - (Fraction(3, 2)*i**3 - i**2)*C",
    4: "(i**4 + i**3 - Fraction(9, 4)*i**2 + Fraction(3, 4)*i)*P - (2*i**4 - i**3 - i**2 + Fraction(1, 2)*i)*C",
}


def _closed(table: dict[int, str], i: int, k: int, label: str) -> Fraction:
    if k not in table:
        raise ValueError(f"{label}_{k} has no closed form here; k must be in {sorted(table)}")
    if i < 1:
        raise ValueError("i must be at least 1")
    env = {"i": i, "P": Fraction(4) ** (i - 1), "C": math.comb(2 * i - 1, i)}
    value = expr.evaluate_exact(table[k], env)
    if value.denominator != 1:
        raise ArithmeticError(f"{label}_{k}({i}) = {value} is not an integer")
    return value


def closed_s(i: int, k: int) -> Fraction:
    return _closed(_CLOSED_S, i, k, "S")


def closed_t(i: int, k: int) -> Fraction:
    return _closed(_CLOSED_T, i, k, "T")


S_ORDERS = tuple(_CLOSED_S)
T_ORDERS = tuple(_CLOSED_T)


# -- weighted identities ---------------------------------------------------------


@dataclass(frozen=True)
class IdentityRecord:
    name: str
    lhs: str
    rhs: str
    anchor: str
    i_min: int = 2
    core: bool = False


@lru_cache(maxsize=None)
def weighted_identities() -> dict[str, IdentityRecord]:
    return {
        e["name"]: IdentityRecord(e["name"], e["lhs"], e["rhs"], e["anchor"], e.get("i_min", 2), e.get("core", False))
        for e in _load("weighted_identities.json")["identities"]
    }


def verify_weighted_identity(name: str, i: int) -> Comparison:
    catalog = weighted_identities()
    if name not in catalog:
        raise KeyError(f"unknown identity {name!r}; known: {sorted(catalog)}")
    rec = catalog[name]
    if i < rec.i_min:
        raise ValueError(f"{name} needs i >= {rec.i_min}")
    env = {"i": i}
    return Comparison(name, env, expr.evaluate_exact(rec.lhs, env), expr.evaluate_exact(rec.rhs, env), rec.anchor)


# -- polynomials and Pell pairs ----------------------------------------------------


class IntPoly:
    """Dense polynomial in ``X`` with integer coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    @classmethod
    def x(cls) -> IntPoly:
        return cls([0, 1])

    @classmethod
    def const(cls, c: int) -> IntPoly:
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPoly([other])
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: IntPoly | int) -> IntPoly:
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> IntPoly:
        return IntPoly([-x for x in self.coeffs])

    def __sub__(self, other: IntPoly | int) -> IntPoly:
        return self + (-_lift(other))

    def __rsub__(self, other: int) -> IntPoly:
        return _lift(other) - self

    def __mul__(self, other: IntPoly | int) -> IntPoly:
        other = _lift(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def divide_by_x(self) -> IntPoly:
        if self.coeffs and self.coeffs[0] != 0:
            raise ArithmeticError(f"{self} is not divisible by X")
        return IntPoly(self.coeffs[1:])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            mag = abs(c)
            body = str(mag) if (mag != 1 or k == 0) else ""
            body = f"{body}{mono}" if body and mono else (body or mono)
            terms.append(("-" if c < 0 else "+", body))
        sign, first = terms[0]
        text = ("-" if sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _lift(v: IntPoly | int) -> IntPoly:
    return v if isinstance(v, IntPoly) else IntPoly([v])


X = IntPoly.x()
NORM_FORM = X * (X - 1)  # y^2 in the quadratic ring


@dataclass(frozen=True)
class QuadElt:
    """``a + b*y`` with ``y^2 = X(X-1)``."""

    a: IntPoly
    b: IntPoly

    def __mul__(self, other: QuadElt) -> QuadElt:
        return QuadElt(self.a * other.a + self.b * other.b * NORM_FORM, self.a * other.b + self.b * other.a)

    def norm(self) -> IntPoly:
        return self.a * self.a - self.b * self.b * NORM_FORM

    def __pow__(self, n: int) -> QuadElt:
        result = QuadElt(IntPoly.const(1), IntPoly())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


FUNDAMENTAL_UNIT = QuadElt(2 * X - 1, IntPoly.const(-2))


def pell_pair(k: int, bound: int = PELL_BOUND) -> tuple[IntPoly, IntPoly]:
    """``(P, Q)`` with ``P^2 - X(X-1) Q^2 = 1`` from ``(2X-1-2y)^(k/2)``."""
    if k % 2:
        raise ValueError("odd k: use pell_pair_odd")
    if not 2 <= k <= bound:
        raise ValueError(f"k must lie in [2, {bound}]")
    u = FUNDAMENTAL_UNIT ** (k // 2)
    p, q = u.a, -u.b
    if p.degree != k // 2 or q.degree != k // 2 - 1:
        raise AssertionError(f"unexpected degrees {p.degree}, {q.degree} for k={k}")
    if p * p - NORM_FORM * q * q != 1:
        raise AssertionError(f"Pell identity fails for k={k}")
    return p, q


def pell_pair_odd(k: int, bound: int = PELL_BOUND) -> tuple[IntPoly, IntPoly]:
    """``(P, Q)`` with ``X Q^2 - (X-1) P^2 = 1`` from ``(X-y)(2X-1-2y)^((k-1)/2)``."""
    if k % 2 == 0:
        raise ValueError("even k: use pell_pair")
    if not 3 <= k <= bound:
        raise ValueError(f"k must lie in [3, {bound}]")
    u = QuadElt(X, IntPoly.const(-1)) * FUNDAMENTAL_UNIT ** ((k - 1) // 2)
    q, p = u.a.divide_by_x(), -u.b
    half = (k - 1) // 2
    if p.degree != half or q.degree != half:
        raise AssertionError(f"unexpected degrees {p.degree}, {q.degree} for k={k}")
    if X * q * q - (X - 1) * p * p != 1:
        raise AssertionError(f"odd Pell identity fails for k={k}")
    return p, q
