"""Partitions, permutations and cycle-type bookkeeping.

Points are ``0..d-1``. Permutations are stored in one-line form, so
``p.images[x]`` is the image of ``x``. Composition follows the usual
convention: ``(p * q)(x) == p(q(x))``.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


class DegreeMismatchError(ValueError):
    """Profiles or permutations that should share a degree do not."""


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing tuple of positive integers.

    Any iterable of positive integers is accepted and sorted on
    construction, so ``Partition([2, 1, 2]) == Partition([2, 2, 1])``.
    """

    parts: tuple[int, ...]
    degree: int = field(init=False, compare=False, repr=False)

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if parts and parts[-1] < 1:
            raise ValueError(f"partition parts must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "degree", sum(parts))

    @classmethod
    def from_multiplicities(cls, mults: dict[int, int] | Iterable[tuple[int, int]]) -> Partition:
        """Build from ``{part: multiplicity}``; negative multiplicities are rejected."""
        items = mults.items() if isinstance(mults, dict) else mults
        parts: list[int] = []
        for part, mult in items:
            if mult < 0:
                raise ValueError(f"negative multiplicity {mult} for part {part}")
            parts.extend([part] * mult)
        return cls(parts)

    @classmethod
    def parse(cls, text: str) -> Partition:
        """Parse ``"4,2,2"`` (whitespace tolerant). The empty string is the empty partition."""
        text = text.strip().strip("()[]")
        if not text:
            return cls(())
        return cls(int(t) for t in text.split(","))

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, j: int) -> int:
        return self.parts[j]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def z(self) -> int:
        """Order of the centralizer of an element of this cycle type."""
        return math.prod(ell**m * math.factorial(m) for ell, m in self.multiplicities().items())

    def sign(self) -> int:
        return -1 if (self.degree - len(self.parts)) % 2 else 1

    def ramification(self) -> int:
        """Sum of ``e - 1`` over the parts."""
        return self.degree - len(self.parts)

    def to_json(self) -> list[int]:
        return list(self.parts)


@dataclass(frozen=True)
class SignedProfile:
    """A partition of zero with even entries, stored as its two halves.

    ``positive`` holds the positive entries and ``negative`` the absolute
    values of the negative ones. Entries are kept as given (not halved).
    """

    positive: Partition
    negative: Partition

    def __post_init__(self):
        for p in (*self.positive, *self.negative):
            if p % 2:
                raise ValueError(f"signed profile entries must be even, got {p}")
        if self.positive.degree != self.negative.degree:
            raise ValueError(
                f"entries must sum to zero: +{self.positive.degree} vs -{self.negative.degree}"
            )

    @classmethod
    def from_entries(cls, mu: Iterable[int]) -> SignedProfile:
        mu = list(mu)
        if any(m == 0 for m in mu):
            raise ValueError("signed profile entries must be nonzero")
        return cls(Partition(m for m in mu if m > 0), Partition(-m for m in mu if m < 0))

    @classmethod
    def hurwitz_even(cls, i: int) -> SignedProfile:
        """``(4, 2, ..., 2, -2, ..., -2)`` of length ``2i - 1`` (genus ``2i``)."""
        if i < 2:
            raise ValueError("need i >= 2")
        return cls.from_entries([4] + [2] * (i - 2) + [-2] * i)

    @classmethod
    def hurwitz_odd(cls, i: int) -> SignedProfile:
        """``(2, ..., 2, -2, ..., -2)`` of length ``2i`` (genus ``2i + 1``)."""
        if i < 1:
            raise ValueError("need i >= 1")
        return cls.from_entries([2] * i + [-2] * i)

    @property
    def length(self) -> int:
        return len(self.positive) + len(self.negative)

    @property
    def degree(self) -> int:
        """Degree of the associated cover: the sum of the positive entries."""
        return self.positive.degree

    def entries(self) -> list[int]:
        return list(self.positive) + [-n for n in self.negative]

    def branch_data(self, g: int) -> list[Partition]:
        """Profiles over the ``3g - 1`` branch points: mu+, -mu-, then simple branching."""
        if self.length != g - 1:
            raise ValueError(f"profile of length {self.length} does not fit genus {g}")
        d = self.degree
        simple = Partition([2] + [1] * (d - 2))
        return [self.positive, self.negative] + [simple] * (3 * g - 3)

    def to_json(self) -> dict[str, list[int]]:
        return {"pos": self.positive.to_json(), "neg": self.negative.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> SignedProfile:
        return cls(Partition(obj["pos"]), Partition(obj["neg"]))


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, d: int) -> Permutation:
        return cls(range(d))

    @classmethod
    def from_cycles(cls, d: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        images = list(range(d))
        for cyc in cycles:
            for a, b in zip(cyc, (*cyc[1:], cyc[0])):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise DegreeMismatchError(f"cannot compose S_{self.degree} with S_{other.degree}")
        return Permutation(compose(self.images, other.images))

    def inverse(self) -> Permutation:
        return Permutation(invert(self.images))

    def conjugate_by(self, h: Permutation) -> Permutation:
        """``h * self * h^-1``: relabel each point ``x`` as ``h(x)``."""
        return Permutation(conjugate(self.images, h.images))

    def cycles(self) -> list[tuple[int, ...]]:
        return cycles_of(self.images)

    def __str__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)


# Tuple-level helpers; the hot loops in constellation counting use these directly.

def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    return tuple(p[x] for x in q)


def invert(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for x, y in enumerate(p):
        inv[y] = x
    return tuple(inv)


def conjugate(p: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[h[x]] = h[y]
    return tuple(out)


def cycles_of(p: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def cycle_lengths(p: Sequence[int]) -> tuple[int, ...]:
    """Cycle lengths of ``p`` sorted decreasing (the raw form of ``cycle_type``)."""
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        n = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            n += 1
        lengths.append(n)
    lengths.sort(reverse=True)
    return tuple(lengths)


def cycle_type(p: Permutation | Sequence[int]) -> Partition:
    images = p.images if isinstance(p, Permutation) else p
    return Partition(cycle_lengths(images))


def class_size(lam: Partition) -> int:
    """Number of permutations of cycle type ``lam``: ``d! / z_lam``."""
    return math.factorial(lam.degree) // lam.z()


def canonical_rep(lam: Partition) -> Permutation:
    """Cycles on consecutive blocks, longest first: (3,2) -> (0 1 2)(3 4)."""
    images = []
    start = 0
    for ell in lam:
        images.extend(range(start + 1, start + ell))
        images.append(start)
        start += ell
    return Permutation(images)


def _blocks(lam: Partition) -> list[range]:
    out = []
    start = 0
    for ell in lam:
        out.append(range(start, start + ell))
        start += ell
    return out


def centralizer_generators(rep: Permutation) -> list[Permutation]:
    """Generators of the centralizer of a canonical representative.

    One rotation per nontrivial cycle and one block swap per adjacent pair
    of equal-length cycles; together they generate the wreath product of
    order ``z_lam``.
    """
    lam = cycle_type(rep)
    if canonical_rep(lam) != rep:
        raise ValueError("centralizer_generators expects the output of canonical_rep")
    d = rep.degree
    blocks = _blocks(lam)
    gens = []
    for blk in blocks:
        if len(blk) > 1:
            images = list(range(d))
            for x in blk:
                images[x] = rep.images[x]
            gens.append(Permutation(images))
    for a, b in zip(blocks, blocks[1:]):
        if len(a) == len(b):
            images = list(range(d))
            for x, y in zip(a, b):
                images[x], images[y] = y, x
            gens.append(Permutation(images))
    return gens


def group_closure(gens: Sequence[Permutation], d: int) -> set[tuple[int, ...]]:
    """All elements of the group generated by ``gens`` (breadth-first; small groups only)."""
    ident = tuple(range(d))
    seen = {ident}
    frontier = [ident]
    raw = [g.images for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in raw:
                y = compose(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def iter_class(lam: Partition) -> Iterator[tuple[int, ...]]:
    """Yield every permutation of cycle type ``lam`` exactly once, as a tuple.

    The smallest unused point always opens the next cycle; the remaining
    points of that cycle are chosen as an ordered tuple, so each
    permutation has exactly one generating path.
    """
    d = lam.degree
    images = [-1] * d
    remaining = Counter(lam.parts)

    def rec(free: list[int]):
        if not free:
            yield tuple(images)
            return
        head, rest = free[0], free[1:]
        for ell in sorted(remaining):
            if remaining[ell] == 0:
                continue
            remaining[ell] -= 1
            for tail in _arrangements(rest, ell - 1):
                cyc = (head, *tail)
                for a, b in zip(cyc, (*cyc[1:], head)):
                    images[a] = b
                used = set(tail)
                yield from rec([x for x in rest if x not in used])
            remaining[ell] += 1

    yield from rec(list(range(d)))


def _arrangements(pool: list[int], k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for j, x in enumerate(pool):
        for tail in _arrangements(pool[:j] + pool[j + 1 :], k - 1):
            yield (x, *tail)


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first, *rest))
    return tuple(out)


def partitions_of(d: int) -> list[Partition]:
    """All partitions of ``d``, reverse-lexicographic (``(d)`` first)."""
    return [Partition(p) for p in _partitions(d, d)]


class GenusSignal(enum.Enum):
    """Returned by ``rh_genus`` when the data admits no connected cover."""

    NEGATIVE = "negative"
    NON_INTEGRAL = "non-integral"


def rh_euler(profiles: Sequence[Partition], d: int) -> int:
    """``2g - 2`` from Riemann-Hurwitz for a degree-``d`` cover of the line."""
    for prof in profiles:
        if prof.degree != d:
            raise DegreeMismatchError(f"profile {prof} is not a partition of {d}")
    return -2 * d + sum(prof.ramification() for prof in profiles)


def rh_genus(profiles: Sequence[Partition], d: int) -> int | GenusSignal:
    chi = rh_euler(profiles, d)
    g = Fraction(chi + 2, 2)
    if g.denominator != 1:
        return GenusSignal.NON_INTEGRAL
    if g < 0:
        return GenusSignal.NEGATIVE
    return int(g)
