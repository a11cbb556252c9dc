"""Exact evaluation of the small arithmetic expressions stored in the data catalogs.

The catalogs (``data/*.json``) describe formulas as Python-syntax strings such
as ``"(2*i+2)*binom(2*i-1, i)"`` or
``"sum((i-s)*(i-s-1)*binom(2*i, s) for s in range(0, i))"``. They are parsed
with :mod:`ast` and walked by a whitelist interpreter: integers stay
integers, ``/`` produces :class:`fractions.Fraction`, and nothing outside the
whitelist (attributes, subscripts, arbitrary calls) is accepted.
"""

from __future__ import annotations

import ast
import math
import operator
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Mapping


class ExprError(ValueError):
    pass


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def _div(a, b):
    return Fraction(a) / Fraction(b)


def _pow(a, b):
    if isinstance(b, Fraction):
        if b.denominator != 1:
            raise ExprError("only integer exponents are supported")
        b = int(b)
    return Fraction(a) ** b if b < 0 else a**b


_BINOPS: dict[type, Callable[[Any, Any], Any]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: _div,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: _pow,
}
_CMPOPS: dict[type, Callable[[Any, Any], bool]] = {
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
}
FUNCTIONS: dict[str, Callable[..., Any]] = {
    "binom": binom,
    "factorial": math.factorial,
    "abs": abs,
    "min": min,
    "max": max,
    "range": range,
    "sum": sum,
    "Fraction": Fraction,
}


@lru_cache(maxsize=1024)
def parse(text: str) -> ast.expr:
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ExprError(f"cannot parse {text!r}: {exc}") from None
    return tree.body


def evaluate(text: str, env: Mapping[str, Any] | None = None) -> Any:
    """Evaluate ``text`` with variables from ``env``; results are int, Fraction or bool."""
    return _Interp(dict(env or {})).visit(parse(text))


def evaluate_exact(text: str, env: Mapping[str, Any] | None = None) -> Fraction:
    return Fraction(evaluate(text, env))


def as_int(value) -> int:
    """Demote an exact value to ``int``; raises if it is not integral."""
    value = Fraction(value)
    if value.denominator != 1:
        raise ExprError(f"expected an integer, got {value}")
    return int(value)


class _Interp:
    def __init__(self, env: dict[str, Any]):
        self.env = env

    def visit(self, node: ast.AST):
        method = getattr(self, "visit_" + type(node).__name__, None)
        if method is None:
            raise ExprError(f"unsupported syntax: {type(node).__name__}")
        return method(node)

    def visit_Constant(self, node: ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ExprError(f"only integer literals are allowed, got {node.value!r}")
        return node.value

    def visit_Name(self, node: ast.Name):
        if node.id in self.env:
            return self.env[node.id]
        if node.id in FUNCTIONS:
            return FUNCTIONS[node.id]
        raise ExprError(f"unbound name {node.id!r}")

    def visit_BinOp(self, node: ast.BinOp):
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ExprError(f"unsupported operator {type(node.op).__name__}")
        return op(self.visit(node.left), self.visit(node.right))

    def visit_UnaryOp(self, node: ast.UnaryOp):
        val = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return +val
        if isinstance(node.op, ast.Not):
            return not val
        raise ExprError(f"unsupported unary operator {type(node.op).__name__}")

    def visit_BoolOp(self, node: ast.BoolOp):
        if isinstance(node.op, ast.And):
            return all(self.visit(v) for v in node.values)
        return any(self.visit(v) for v in node.values)

    def visit_Compare(self, node: ast.Compare):
        left = self.visit(node.left)
        for op, comp in zip(node.ops, node.comparators):
            fn = _CMPOPS.get(type(op))
            if fn is None:
                raise ExprError(f"unsupported comparison {type(op).__name__}")
            right = self.visit(comp)
            if not fn(left, right):
                return False
            left = right
        return True

    def visit_IfExp(self, node: ast.IfExp):
        return self.visit(node.body) if self.visit(node.test) else self.visit(node.orelse)

    def visit_Tuple(self, node: ast.Tuple):
        return tuple(self.visit(e) for e in node.elts)

    def visit_List(self, node: ast.List):
        return [self.visit(e) for e in node.elts]

    def visit_Call(self, node: ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise ExprError("only whitelisted functions may be called")
        if node.keywords:
            raise ExprError("keyword arguments are not supported")
        args = [self.visit(a) for a in node.args]
        return FUNCTIONS[node.func.id](*args)

    def visit_GeneratorExp(self, node: ast.GeneratorExp):
        if len(node.generators) != 1:
            raise ExprError("only single-loop generator expressions are supported")
        gen = node.generators[0]
        if not isinstance(gen.target, ast.Name) or gen.is_async:
            raise ExprError("loop target must be a plain name")
        iterable = self.visit(gen.iter)
        name = gen.target.id
        saved = self.env.get(name, _MISSING)
        out = []
        try:
            for value in iterable:
                self.env[name] = value
                if all(self.visit(cond) for cond in gen.ifs):
                    out.append(self.visit(node.elt))
        finally:
            if saved is _MISSING:
                self.env.pop(name, None)
            else:
                self.env[name] = saved
        return out


_MISSING = object()
