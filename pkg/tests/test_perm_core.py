from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import partition

from prym_hurwitz.perm_core import (
    DegreeMismatchError,
    GenusSignal,
    Partition,
    Permutation,
    SignedProfile,
    canonical_rep,
    centralizer_generators,
    class_size,
    compose,
    conjugate,
    cycle_type,
    group_closure,
    invert,
    iter_class,
    partitions_of,
    rh_euler,
    rh_genus,
)

perms = st.integers(1, 7).flatmap(lambda d: st.permutations(range(d)))


def test_partition_sorts_and_parses():
    assert Partition([2, 1, 2]) == Partition([2, 2, 1])
    assert Partition.parse(" (4, 2,2) ") == Partition([4, 2, 2])
    assert Partition.parse("") == Partition()
    assert Partition.from_multiplicities({2: 3, 1: 2}).parts == (2, 2, 2, 1, 1)
    with pytest.raises(ValueError):
        Partition([2, 0])
    with pytest.raises(ValueError):
        Partition.from_multiplicities({2: -1})


def test_partition_numerics():
    lam = Partition([3, 3, 2, 1])
    assert lam.degree == 9
    assert lam.z() == 3**2 * 2 * 2 * 1
    assert lam.ramification() == 5
    assert lam.sign() == -1
    assert str(lam) == "(3,3,2,1)"


@pytest.mark.parametrize("d", range(1, 9))
def test_class_sizes_sum_to_factorial(d):
    assert sum(class_size(p) for p in partitions_of(d)) == math.factorial(d)


@pytest.mark.parametrize("parts", [(1,), (2, 1), (3, 1, 1), (2, 2, 2), (4, 2), (3, 2, 1), (2, 2, 1, 1)])
def test_iter_class_matches_itertools(parts):
    lam = Partition(parts)
    mine = list(iter_class(lam))
    assert len(mine) == len(set(mine)) == class_size(lam)
    brute = {p for p in itertools.permutations(range(lam.degree)) if cycle_type(p) == lam}
    assert set(mine) == brute


@given(perms, st.data())
def test_compose_and_invert(p, data):
    q = data.draw(st.permutations(range(len(p))))
    assert compose(p, invert(p)) == tuple(range(len(p)))
    assert cycle_type(conjugate(p, q)) == cycle_type(p)
    assert (Permutation(p) * Permutation(q)).images == compose(p, q)


@given(perms)
def test_conjugate_is_hpinv(p):
    h = tuple(reversed(range(len(p))))
    assert conjugate(p, h) == compose(compose(h, p), invert(h))


@pytest.mark.parametrize("parts", [(3,), (2, 2), (3, 3, 1), (2, 2, 1, 1), (4, 2, 2)])
def test_centralizer_generators_close_to_full_centralizer(parts):
    lam = Partition(parts)
    rep = canonical_rep(lam)
    gens = centralizer_generators(rep)
    for g in gens:
        assert conjugate(rep.images, g.images) == rep.images
    assert len(group_closure(gens, lam.degree)) == lam.z()


def test_from_cycles_roundtrip():
    p = Permutation.from_cycles(5, [(0, 2, 4), (1, 3)])
    assert cycle_type(p) == Partition([3, 2])
    assert p.inverse() * p == Permutation.identity(5)


def test_riemann_hurwitz():
    d = 4
    profs = [Partition([4]), Partition([2, 1, 1]), Partition([3, 1])]
    assert rh_euler(profs, d) == -2
    assert rh_genus(profs, d) == 0
    assert rh_genus([Partition([2, 1])] * 2, 3) is GenusSignal.NEGATIVE
    assert rh_genus([Partition([2, 1])] * 3, 3) is GenusSignal.NON_INTEGRAL
    with pytest.raises(DegreeMismatchError):
        rh_euler([Partition([2]), Partition([2, 1])], 2)


def test_signed_profiles():
    even = SignedProfile.hurwitz_even(3)
    assert even.entries() == [4, 2, -2, -2, -2]
    assert even.length == 5 and even.degree == 6
    odd = SignedProfile.hurwitz_odd(2)
    assert odd.length == 4
    assert SignedProfile.from_json(even.to_json()) == even
    data = even.branch_data(6)
    assert len(data) == 2 + 15
    with pytest.raises(ValueError):
        SignedProfile.from_entries([3, -3])
    with pytest.raises(ValueError):
        SignedProfile.from_entries([4, -2])


@settings(max_examples=50)
@given(st.integers(1, 12))
def test_partitions_of_count(d):

    parts = partitions_of(d)
    assert len(parts) == len(set(parts)) == partition(d)
    assert all(p.degree == d for p in parts)
