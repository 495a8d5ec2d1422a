from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import coin_change_counts, naive_crank, naive_partitions
from rankcrank.partitions import (
    Partition,
    conjugate,
    crank,
    enumerate_partitions,
    iter_part_lists,
    partition_count,
    partition_counts,
    rank,
)

partitions_st = st.lists(st.integers(1, 30), min_size=1, max_size=25).map(Partition.from_parts)


def test_partition_count_matches_coin_change():
    ref = coin_change_counts(200)
    assert partition_counts(200) == ref
    assert partition_count(100) == 190569292
    assert partition_count(0) == 1


def test_partition_count_large_known_value():
    # Hardy-Ramanujan-Rademacher era value
    assert partition_count(1000) == 24061467864032622473692149727991


def test_partition_count_rejects_negative():
    with pytest.raises(ValueError):
        partition_count(-1)


def test_rank_and_crank_of_four():
    got = {p.parts: (rank(p), crank(p)) for p in enumerate_partitions(4)}
    assert got == {
        (4,): (3, 4),
        (3, 1): (1, 0),
        (2, 2): (0, 2),
        (2, 1, 1): (-1, -2),
        (1, 1, 1, 1): (-3, -4),
    }


def test_small_examples():
    assert rank([1]) == 0 and crank([1]) == -1
    assert crank([3, 3, 2]) == 3
    assert crank([5, 3, 1, 1]) == 2 - 2
    with pytest.raises(ValueError):
        rank([])
    with pytest.raises(ValueError):
        crank(Partition(()))


@pytest.mark.parametrize("n", [1, 2, 5, 9, 15, 22])
def test_enumeration_matches_naive_recursion(n):
    assert sorted(tuple(p) for p in iter_part_lists(n)) == sorted(naive_partitions(n))


def test_enumeration_is_lexicographically_decreasing():
    seen = [tuple(p) for p in iter_part_lists(12)]
    assert seen == sorted(seen, reverse=True)
    assert len(seen) == partition_count(12)


@given(partitions_st)
def test_crank_matches_definition(p):
    assert crank(p) == naive_crank(list(p.parts))


@given(partitions_st)
def test_conjugate_involution_and_rank_negation(p):
    c = conjugate(p)
    assert conjugate(c) == p
    assert c.n == p.n
    assert rank(c) == -rank(p)
    assert c.largest == p.length


@given(st.lists(st.integers(0, 6), min_size=2, max_size=12))
def test_multiplicity_round_trip(mult):
    mult[0] = 0
    p = Partition.from_multiplicities(mult)
    back = Counter(p.parts)
    assert all(back[k] == mult[k] for k in range(1, len(mult)))


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
