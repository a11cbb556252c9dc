"""Counting three-point covers of the line by permutation triples.

A connected degree-``d`` cover of the line branched over three points with
profiles ``b1, b2, b3`` corresponds to a triple of permutations with those
cycle types, ``s1 * s2 = s3``, generating a transitive group; covers up to
isomorphism are triples up to simultaneous conjugation.

The orbit count is symmetric in the three profiles (cyclic rotation of
product-one tuples and inversion are bijections commuting with
conjugation), so the implementation is free to fix whichever class is
convenient and enumerate the smallest one.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from . import expr
from .perm_core import (
    DegreeMismatchError,
    GenusSignal,
    Partition,
    Permutation,
    canonical_rep,
    centralizer_generators,
    class_size,
    compose,
    conjugate,
    cycle_lengths,
    iter_class,
    partitions_of,
    rh_genus,
)

ENV_BOUND = "PRYM_HURWITZ_BOUND"
FROBENIUS_MAX_DEGREE = 14


class CapacityError(RuntimeError):
    """The requested degree exceeds the configured brute-force bound."""


def default_bound() -> int:
    return int(os.environ.get(ENV_BOUND, "12"))


@dataclass(frozen=True)
class TripleCountQuery:
    b1: Partition
    b2: Partition
    b3: Partition
    require_transitive: bool = True

    def __post_init__(self):
        degs = {self.b1.degree, self.b2.degree, self.b3.degree}
        if len(degs) != 1:
            raise DegreeMismatchError(
                f"profiles {self.b1}, {self.b2}, {self.b3} have different degrees"
            )

    @property
    def degree(self) -> int:
        return self.b1.degree

    @property
    def profiles(self) -> tuple[Partition, Partition, Partition]:
        return (self.b1, self.b2, self.b3)


@dataclass(frozen=True)
class TripleCountResult:
    count: int
    genus: int | GenusSignal
    method: str
    representatives: tuple[tuple[int, ...], ...] = field(default=(), repr=False)
    elapsed_ms: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        genus = self.genus.value if isinstance(self.genus, GenusSignal) else self.genus
        return {
            "count": self.count,
            "genus": genus,
            "method": self.method,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def _is_transitive(p: Sequence[int], q: Sequence[int]) -> bool:
    d = len(p)
    parent = list(range(d))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = d
    for perm in (p, q):
        for x in range(d):
            a, b = find(x), find(perm[x])
            if a != b:
                parent[a] = b
                components -= 1
                if components == 1:
                    return True
    return components == 1


def _choose_roles(profiles: Sequence[Partition]) -> tuple[int, int, int]:
    """Indices (fixed, enumerated, target): enumerate the smallest class, preferring b2."""
    sizes = [class_size(p) for p in profiles]
    enum_idx = min((1, 0, 2), key=lambda j: sizes[j])
    rest = [j for j in (0, 1, 2) if j != enum_idx]
    return rest[0], enum_idx, rest[1]


def count_triples_up_to_conjugacy(
    q: TripleCountQuery,
    bound: int | None = None,
    conjugator: Permutation | None = None,
) -> TripleCountResult:
    """Number of triples up to simultaneous conjugation.

    One class representative is fixed (``conjugator`` optionally moves it
    off the canonical form), the smallest class is enumerated, and the
    survivors are split into orbits of the fixed element's centralizer.
    """
    bound = default_bound() if bound is None else bound
    d = q.degree
    if d > bound:
        raise CapacityError(f"degree {d} exceeds brute-force bound {bound}")
    t0 = time.perf_counter()
    genus = rh_genus(q.profiles, d)

    fixed_idx, enum_idx, target_idx = _choose_roles(q.profiles)
    rep = canonical_rep(q.profiles[fixed_idx])
    gens = [g.images for g in centralizer_generators(rep)]
    fixed = rep.images
    if conjugator is not None:
        h = conjugator.images
        fixed = conjugate(fixed, h)
        gens = [conjugate(g, h) for g in gens]
    target = q.profiles[target_idx].parts

    survivors = set()
    for cand in iter_class(q.profiles[enum_idx]):
        if cycle_lengths(compose(fixed, cand)) != target:
            continue
        if q.require_transitive and not _is_transitive(fixed, cand):
            continue
        survivors.add(cand)

    reps = []
    unseen = set(survivors)
    while unseen:
        start = min(unseen)
        reps.append(start)
        unseen.discard(start)
        stack = [start]
        while stack:
            x = stack.pop()
            for g in gens:
                y = conjugate(x, g)
                if y in unseen:
                    unseen.discard(y)
                    stack.append(y)
                elif y not in survivors:
                    raise AssertionError("centralizer action left the solution set")

    elapsed = (time.perf_counter() - t0) * 1000
    return TripleCountResult(len(reps), genus, "brute-force", tuple(reps), elapsed)


def labelled_count(b1: Partition, b2: Partition, b3: Partition, bound: int | None = None) -> int:
    """Labelled triples ``s1 * s2 = s3`` with the given cycle types, transitivity off.

    Fixes one representative and scales by its class size.
    """
    q = TripleCountQuery(b1, b2, b3, require_transitive=False)
    bound = default_bound() if bound is None else bound
    if q.degree > bound:
        raise CapacityError(f"degree {q.degree} exceeds brute-force bound {bound}")
    fixed_idx, enum_idx, target_idx = _choose_roles(q.profiles)
    fixed = canonical_rep(q.profiles[fixed_idx]).images
    target = q.profiles[target_idx].parts
    hits = sum(
        1 for cand in iter_class(q.profiles[enum_idx]) if cycle_lengths(compose(fixed, cand)) == target
    )
    return hits * class_size(q.profiles[fixed_idx])


def _class_array(lam: Partition) -> np.ndarray:
    return np.array(list(iter_class(lam)), dtype=np.int16).reshape(-1, lam.degree)


def _point_cycle_lengths(perms: np.ndarray) -> np.ndarray:
    """Row-wise: for each point, the length of the cycle containing it (sorted)."""
    n, d = perms.shape
    ident = np.arange(d, dtype=perms.dtype)
    lengths = np.zeros((n, d), dtype=np.int16)
    cur = perms.copy()
    for t in range(1, d + 1):
        hit = (cur == ident) & (lengths == 0)
        lengths[hit] = t
        cur = np.take_along_axis(perms, cur, axis=1)
    lengths.sort(axis=1)
    return lengths


def labelled_count_exhaustive(
    b1: Partition, b2: Partition, b3: Partition, max_degree: int = 9, chunk: int = 1 << 21
) -> int:
    """Exhaustive count over the full product class(b1) x class(b2).

    Independent of the orbit machinery: no representative is fixed and no
    symmetry is used. Exponential in ``d``; meant as an oracle for small degree.
    """
    TripleCountQuery(b1, b2, b3, require_transitive=False)
    d = b1.degree
    if d > max_degree:
        raise CapacityError(f"exhaustive enumeration is limited to degree {max_degree}")
    first, second = _class_array(b1), _class_array(b2)
    target = np.sort(np.repeat(np.array(b3.parts, dtype=np.int16), b3.parts))
    per_row = max(1, chunk // max(1, second.shape[0] * d))
    total = 0
    for start in range(0, first.shape[0], per_row):
        block = first[start : start + per_row]
        # composed[i, j, p] = block[i][second[j][p]]
        composed = block[:, second].reshape(-1, d)
        total += int(np.all(_point_cycle_lengths(composed) == target, axis=1).sum())
    return total


@lru_cache(maxsize=None)
def _mn(lam: tuple[int, ...], rho: tuple[int, ...]) -> int:
    if not rho:
        return 1 if not lam else 0
    r, rest = rho[0], rho[1:]
    n = len(lam)
    beta = [lam[j] + (n - 1 - j) for j in range(n)]
    beads = set(beta)
    total = 0
    for b in beta:
        nb = b - r
        if nb < 0 or nb in beads:
            continue
        between = sum(1 for c in beta if nb < c < b)
        new_beta = sorted((beads - {b}) | {nb}, reverse=True)
        new_lam = tuple(x for x in (v - (n - 1 - j) for j, v in enumerate(new_beta)) if x > 0)
        total += (-1) ** between * _mn(new_lam, rest)
    return total


def mn_character(lam: Partition, rho: Partition) -> int:
    """Irreducible character of S_d labelled by ``lam`` at the class ``rho``.

    Murnaghan-Nakayama: strip border strips of length ``rho[0]`` using the
    beta-set (abacus) encoding, where removing a strip moves one bead down
    by ``r`` and the height parity is the number of beads jumped over.
    """
    if lam.degree != rho.degree:
        raise DegreeMismatchError(f"{lam} and {rho} have different degrees")
    return _mn(lam.parts, rho.parts)


def frobenius_total(b1: Partition, b2: Partition, b3: Partition) -> Fraction:
    """Labelled triples with product one in the three classes (no transitivity).

    ``|C1||C2||C3| / d! * sum_lam chi(C1) chi(C2) chi(C3) / chi(1)``.
    """
    TripleCountQuery(b1, b2, b3)
    d = b1.degree
    if d > FROBENIUS_MAX_DEGREE:
        raise CapacityError(f"character sums are limited to degree {FROBENIUS_MAX_DEGREE}")
    one = Partition([1] * d)
    acc = Fraction(0)
    for lam in partitions_of(d):
        dim = mn_character(lam, one)
        acc += Fraction(
            mn_character(lam, b1) * mn_character(lam, b2) * mn_character(lam, b3), dim
        )
    total = acc * class_size(b1) * class_size(b2) * class_size(b3) / math.factorial(d)
    if total.denominator != 1 or total < 0:
        raise ArithmeticError(f"character sum gave {total}, not a non-negative integer")
    return total


# ---------------------------------------------------------------------------
# The ten-row table of three-point counts, stored in data/table_rows.json.


class NotInstantiable(ValueError):
    """The row's profile templates do not give partitions for these parameters."""


def build_profile(template: Sequence[tuple[str, str]], env: dict[str, int]) -> Partition:
    """Expand ``[(part, multiplicity), ...]`` expression pairs into a partition."""
    parts: list[int] = []
    for part_src, mult_src in template:
        part = expr.as_int(expr.evaluate(str(part_src), env))
        mult = expr.as_int(expr.evaluate(str(mult_src), env))
        if mult < 0 or (mult > 0 and part < 1):
            raise NotInstantiable(f"part {part} with multiplicity {mult} at {env}")
        parts += [part] * mult
    return Partition(parts)


@dataclass(frozen=True)
class TableRow:
    row: int
    params: tuple[str, ...]
    domain: str
    degree: str
    templates: tuple[tuple[tuple[str, str], ...], ...]
    expected: str
    anchor: str

    def instantiate(self, **values: int) -> tuple[Partition, Partition, Partition]:
        if set(values) != set(self.params):
            raise TypeError(f"row {self.row} takes parameters {self.params}, got {sorted(values)}")
        if not expr.evaluate(self.domain, values):
            raise NotInstantiable(f"row {self.row}: {values} outside '{self.domain}'")
        d = expr.as_int(expr.evaluate(self.degree, values))
        out = []
        for tmpl in self.templates:
            prof = build_profile(tmpl, values)
            if prof.degree != d:
                raise NotInstantiable(f"row {self.row}: {prof} is not a partition of {d}")
            out.append(prof)
        return tuple(out)

    def expected_count(self, **values: int) -> int:
        return expr.as_int(expr.evaluate(self.expected, values))

    def parameter_grid(self, max_degree: int) -> Iterator[dict[str, int]]:
        """Parameter values whose degree is at most ``max_degree`` and that instantiate."""
        for combo in product(range(1, max_degree + 1), repeat=len(self.params)):
            values = dict(zip(self.params, combo))
            if not expr.evaluate(self.domain, values):
                continue
            if expr.as_int(expr.evaluate(self.degree, values)) > max_degree:
                continue
            try:
                self.instantiate(**values)
            except NotInstantiable:
                continue
            yield values


@lru_cache(maxsize=None)
def table_rows() -> dict[int, TableRow]:
    raw = json.loads(resources.files(__package__).joinpath("data/table_rows.json").read_text())
    rows = {}
    for r in raw["rows"]:
        rows[r["row"]] = TableRow(
            row=r["row"],
            params=tuple(r["params"]),
            domain=r["domain"],
            degree=r["degree"],
            templates=tuple(tuple((str(a), str(b)) for a, b in r[key]) for key in ("b1", "b2", "b3")),
            expected=r["expected"],
            anchor=r["anchor"],
        )
    return rows


@dataclass(frozen=True)
class TableCheck:
    row: int
    params: dict[str, int]
    profiles: tuple[Partition, Partition, Partition] | None
    expected: int | None
    computed: int | None
    genus: int | GenusSignal | None
    instantiable: bool = True
    elapsed_ms: float = 0.0

    @property
    def match(self) -> bool:
        return self.instantiable and self.expected == self.computed

    def to_json(self) -> dict:
        genus = self.genus.value if isinstance(self.genus, GenusSignal) else self.genus
        return {
            "row": self.row,
            "params": self.params,
            "profiles": [p.to_json() for p in self.profiles] if self.profiles else None,
            "expected": self.expected,
            "computed": self.computed,
            "genus": genus,
            "instantiable": self.instantiable,
            "match": self.match,
        }


def verify_table_row(row: int, bound: int | None = None, **params: int) -> TableCheck:
    """Brute-force one table entry and compare with its closed form.

    Rows whose templates do not produce partitions (row 7 at ``k = 2``, say)
    come back with ``instantiable=False`` rather than a count of zero.
    """
    entry = table_rows()[row]
    try:
        profiles = entry.instantiate(**params)
    except NotInstantiable:
        return TableCheck(row, params, None, None, None, None, instantiable=False)
    res = count_triples_up_to_conjugacy(TripleCountQuery(*profiles), bound=bound)
    return TableCheck(
        row, params, profiles, entry.expected_count(**params), res.count, res.genus,
        elapsed_ms=res.elapsed_ms,
    )
