"""Degrees of two elliptic Hurwitz spaces, assembled from case ledgers.

Each family's degree over the moduli of one-pointed genus-1 curves is the
length of the fibre over the nodal cubic. The admissible covers in that fibre
split into cases. Each case is a product of three-point component counts,
which can be checked by brute force, times a multiplicity coming from a
local-ring computation, which is taken as given. The ledgers live in
``data/boundary_ledgers.json``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

from . import expr
from .constellations import (
    NotInstantiable,
    TripleCountQuery,
    build_profile,
    count_triples_up_to_conjugacy,
    default_bound,
)
from .perm_core import Partition

FAMILIES = ("total", "near-total")


class LedgerMismatch(AssertionError):
    """A ledger line disagrees with brute force or with its stated contribution."""


@dataclass(frozen=True)
class LedgerComponent:
    role: str
    templates: tuple[tuple[tuple[str, str], ...], ...]
    count: str
    row: int | None = None
    sweep_var: str | None = None
    sweep_values: str | None = None
    sweep_where: str | None = None

    def bindings(self, k: int) -> list[dict[str, int]]:
        base = {"k": k}
        if self.sweep_var is None:
            return [base]
        out = []
        for v in expr.evaluate(self.sweep_values, base):
            env = {**base, self.sweep_var: v}
            if self.sweep_where is None or expr.evaluate(self.sweep_where, env):
                out.append(env)
        return out

    def profiles(self, env: dict[str, int]) -> tuple[Partition, Partition, Partition] | None:
        """The three profiles, or None when the templates do not produce partitions."""
        try:
            profs = tuple(build_profile(t, env) for t in self.templates)
        except NotInstantiable:
            return None
        if len({p.degree for p in profs}) != 1:
            return None
        return profs  # type: ignore[return-value]


@dataclass(frozen=True)
class LedgerLine:
    family: str
    case: str
    label: str
    multiplicity: str
    contribution: str
    anchor: str
    components: tuple[LedgerComponent, ...]


@dataclass(frozen=True)
class ComponentResult:
    role: str
    row: int | None
    profiles: tuple[tuple[Partition, Partition, Partition] | None, ...]
    expected: int
    computed: int | None  # None in ledger-only mode

    def to_json(self) -> dict:
        return {
            "role": self.role,
            "row": self.row,
            "instances": [None if p is None else [q.to_json() for q in p] for p in self.profiles],
            "expected": self.expected,
            "computed": self.computed,
        }


@dataclass(frozen=True)
class LineResult:
    line: LedgerLine
    k: int
    multiplicity: int
    contribution: int
    stated: int
    components: tuple[ComponentResult, ...]

    def to_json(self) -> dict:
        return {
            "case": self.line.case,
            "label": self.line.label,
            "anchor": self.line.anchor,
            "multiplicity": self.multiplicity,
            "contribution": self.contribution,
            "stated_contribution": self.stated,
            "components": [c.to_json() for c in self.components],
        }


@dataclass(frozen=True)
class LedgerReport:
    family: str
    k: int
    checked: bool
    lines: tuple[LineResult, ...]
    degree: int
    stated_degree: int
    anchor: str

    @property
    def match(self) -> bool:
        return self.degree == self.stated_degree and all(r.contribution == r.stated for r in self.lines)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "k": self.k,
            "checked": self.checked,
            "degree": self.degree,
            "stated_degree": self.stated_degree,
            "match": self.match,
            "anchor": self.anchor,
            "lines": [r.to_json() for r in self.lines],
        }


@lru_cache(maxsize=None)
def _raw() -> dict:
    return json.loads(resources.files("prym_hurwitz").joinpath("data").joinpath("boundary_ledgers.json").read_text())


@lru_cache(maxsize=None)
def ledger(family: str) -> tuple[LedgerLine, ...]:
    fams = _raw()["families"]
    if family not in fams:
        raise KeyError(f"unknown family {family!r}; expected one of {FAMILIES}")
    lines = []
    for ln in fams[family]["lines"]:
        comps = []
        for c in ln["components"]:
            sweep = c.get("sweep") or {}
            comps.append(
                LedgerComponent(
                    role=c["role"],
                    templates=tuple(tuple((str(a), str(b)) for a, b in c[key]) for key in ("b1", "b2", "b3")),
                    count=c["count"],
                    row=c.get("row"),
                    sweep_var=sweep.get("var"),
                    sweep_values=sweep.get("values"),
                    sweep_where=sweep.get("where"),
                )
            )
        lines.append(
            LedgerLine(family, ln["case"], ln["label"], ln["multiplicity"], ln["contribution"], ln["anchor"], tuple(comps))
        )
    return tuple(lines)


def _brute(profiles: Sequence[Partition], bound: int) -> int:
    return count_triples_up_to_conjugacy(TripleCountQuery(*profiles), bound=bound).count


def evaluate_line(line: LedgerLine, k: int, checked: bool = False, bound: int | None = None) -> LineResult:
    """Contribution of one ledger line; in checked mode every component count is brute-forced.

    A component whose templates do not produce partitions at this ``k`` has
    no covers, so it is counted as 0.
    """
    bound = default_bound() if bound is None else bound
    results = []
    for comp in line.components:
        envs = comp.bindings(k)
        instances = tuple(comp.profiles(env) for env in envs)
        expected = sum(expr.as_int(expr.evaluate(comp.count, env)) for env in envs)
        computed = None
        if checked:
            computed = sum(0 if p is None else _brute(p, bound) for p in instances)
            if computed != expected:
                raise LedgerMismatch(
                    f"{line.family} case {line.case} ({line.label}), component {comp.role}"
                    f"{'' if comp.row is None else f' [table row {comp.row}]'} at k={k}: "
                    f"expected {expected}, brute force {computed}"
                )
        results.append(ComponentResult(comp.role, comp.row, instances, expected, computed))
    env = {"k": k}
    mult = expr.as_int(expr.evaluate(line.multiplicity, env))
    counts = [r.computed if checked else r.expected for r in results]
    contribution = math.prod(counts) * mult
    stated = expr.as_int(expr.evaluate(line.contribution, env))
    if contribution != stated:
        raise LedgerMismatch(
            f"{line.family} case {line.case} ({line.label}) at k={k}: "
            f"counts {counts} x multiplicity {mult} = {contribution}, stated {stated}"
        )
    return LineResult(line, k, mult, contribution, stated, tuple(results))


def family_anchor(family: str) -> str:
    return _raw()["families"][family]["anchor"]


def ledger_report(family: str, k: int, checked: bool = False, bound: int | None = None) -> LedgerReport:
    if k < 2:
        raise ValueError("k must be at least 2")
    lines = tuple(evaluate_line(ln, k, checked, bound) for ln in ledger(family))
    fam = _raw()["families"][family]
    stated = expr.as_int(expr.evaluate(fam["degree"], {"k": k}))
    degree = sum(r.contribution for r in lines)
    if degree != stated:
        raise LedgerMismatch(f"{family} at k={k}: ledger sums to {degree}, stated degree {stated}")
    return LedgerReport(family, k, checked, lines, degree, stated, fam["anchor"])


def degree_total_ram(k: int, checked: bool = False, bound: int | None = None) -> int:
    """Degree for profiles ``(2k), (2^k), (2^k), (2,1^(2k-2))``: always 6."""
    return ledger_report("total", k, checked, bound).degree


def degree_near_total_ram(k: int, checked: bool = False, bound: int | None = None) -> int:
    """Degree for profiles ``(2k-1,1), (4,2^(k-2)), (2^k), (2,1^(2k-2))``: ``6k - 3``."""
    return ledger_report("near-total", k, checked, bound).degree


__all__ = [
    "FAMILIES",
    "LedgerMismatch",
    "LedgerReport",
    "degree_near_total_ram",
    "degree_total_ram",
    "evaluate_line",
    "family_anchor",
    "ledger",
    "ledger_report",
]
