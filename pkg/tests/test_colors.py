import itertools

import pytest
from hypothesis import given, strategies as st

from zonocube.colors import (
    SetSystem,
    colorset,
    interval_rank,
    is_peripheral,
    is_r_separated,
    is_weakly_k_separated,
    packet,
    parity,
    separation_blocks,
)
from zonocube.geom import Realization, det_sign


def all_subsets(n):
    return [tuple(s) for k in range(n + 1) for s in itertools.combinations(range(1, n + 1), k)]


small_sets = st.builds(lambda xs: tuple(sorted(xs)), st.frozensets(st.integers(1, 9), max_size=9))


# ---------------------------------------------------------------- parity

def test_parity_examples():
    assert parity(6, (2, 4)) == "even"
    assert parity(1, (2,)) == "odd"
    assert parity(4, (1, 2, 3)) == "even"
    # oracle for the last one: an integer Vandermonde determinant
    assert det_sign((1, 2, 3), 4, Realization((1, 2, 3, 4), 4)) == 1


def test_parity_rejects_member():
    with pytest.raises(ValueError):
        parity(4, (2, 4))


def test_top_color_always_even():
    for n in range(2, 9):
        for d in range(2, 6):
            for j in itertools.combinations(range(1, n), d - 1):
                assert parity(n, j) == "even"


def test_parity_matches_determinant_sign():
    for d in range(1, 6):
        for n in range(d, 8):
            real = Realization(range(1, n + 1), d)
            for j in itertools.combinations(range(1, n + 1), d - 1):
                for i in range(1, n + 1):
                    if i in j:
                        continue
                    assert (det_sign(j, i, real) == 1) == (parity(i, j) == "even")


# ----------------------------------------------------- separation blocks

def test_separation_block_examples():
    assert separation_blocks((1, 3, 5), (2, 4, 6)) == 6
    assert not is_r_separated((1, 3, 5), (2, 4, 6), 3)
    assert separation_blocks((2,), (1, 3)) == 3
    assert is_r_separated((2,), (1, 3), 2)
    assert not is_r_separated((2,), (1, 3), 1)
    assert separation_blocks((1, 2), (1, 2, 5, 6)) == 1
    assert is_r_separated((1, 2), (1, 2, 5, 6), 0)
    assert separation_blocks((1, 2), (1, 2)) == 0


def _chain_oracle(x, y, r):
    """Direct definition: no increasing chain of r+2 elements alternating
    between the two differences."""
    sx, sy = set(x), set(y)
    diff = sorted(sx ^ sy)
    for chain in itertools.combinations(diff, r + 2):
        sides = [c in sx for c in chain]
        if all(a != b for a, b in zip(sides, sides[1:])):
            return False
    return True


def test_separation_agrees_with_chain_search():
    for n in range(0, 8):
        universe = all_subsets(n)
        for x, y in itertools.combinations_with_replacement(universe, 2):
            m = separation_blocks(x, y)
            for r in range(0, 5):
                assert (m <= r + 1) == _chain_oracle(x, y, r)


@given(small_sets, small_sets, st.integers(0, 6))
def test_separation_symmetric_reflexive(x, y, r):
    assert is_r_separated(x, x, r)
    assert is_r_separated(x, y, r) == is_r_separated(y, x, r)


@given(small_sets, small_sets)
def test_separation_monotone_in_r(x, y):
    flags = [is_r_separated(x, y, r) for r in range(0, 10)]
    assert flags == sorted(flags)
    assert flags[-1]


# ------------------------------------------------------- weak separation

def test_weak_separation_examples():
    assert is_weakly_k_separated((1, 5), (2, 3, 4), 1)
    assert is_weakly_k_separated((1, 5), (2, 4), 1)
    assert not is_weakly_k_separated((1, 5), (3,), 1)
    assert not is_weakly_k_separated((2, 5), (1, 3, 6), 3)


def test_weak_separation_rejects_even_k():
    with pytest.raises(ValueError):
        is_weakly_k_separated((1,), (2,), 2)
    with pytest.raises(ValueError):
        is_weakly_k_separated((1,), (2,), 0)


def test_weak_separation_weaker_than_strong():
    universe = all_subsets(6)
    for x, y in itertools.combinations(universe, 2):
        for k in (1, 3):
            if is_r_separated(x, y, k):
                assert is_weakly_k_separated(x, y, k)


def test_equal_sizes_make_weak_equal_strong():
    # with equal sizes weak k-separation coincides with (k+1)-separation
    universe = all_subsets(6)
    for x, y in itertools.combinations(universe, 2):
        if len(x) != len(y):
            continue
        for k in (1, 3):
            assert is_weakly_k_separated(x, y, k) == is_r_separated(x, y, k + 1)


@given(small_sets, small_sets, st.sampled_from([1, 3, 5]))
def test_weak_separation_symmetric(x, y, k):
    assert is_weakly_k_separated(x, y, k) == is_weakly_k_separated(y, x, k)


# ------------------------------------------------------- interval ranks

def test_interval_rank():
    assert interval_rank(()) == 0
    assert interval_rank((1, 3, 5)) == 3
    assert interval_rank((1, 2, 3)) == 1
    assert interval_rank((2, 3, 5, 6, 9)) == 3


def test_peripheral_examples():
    assert not is_peripheral((1, 3, 5), 6, 4)
    for d in range(1, 6):
        assert is_peripheral((), 6, d)
    count = sum(1 for x in all_subsets(6) if is_peripheral(x, 6, 4))
    assert count == 52  # 64 - 12 clock sets


def test_clock_sets_are_the_non_peripherals():
    clock = {(1, 3, 5), (3, 5), (2, 3, 5), (2, 5), (2, 4, 5), (2, 4), (2, 4, 6),
             (1, 2, 4, 6), (1, 4, 6), (1, 3, 4, 6), (1, 3, 6), (1, 3, 5, 6)}
    assert {x for x in all_subsets(6) if not is_peripheral(x, 6, 4)} == clock


# --------------------------------------------------------------- packets

def test_packet_examples():
    assert packet((1, 2, 3), 2) == ((1, 2), (1, 3), (2, 3))
    assert packet(range(1, 7), 5) == (
        (1, 2, 3, 4, 5), (1, 2, 3, 4, 6), (1, 2, 3, 5, 6),
        (1, 2, 4, 5, 6), (1, 3, 4, 5, 6), (2, 3, 4, 5, 6))
    # reversing gives the antilexicographic order
    assert tuple(reversed(packet((2, 5, 7), 2))) == ((5, 7), (2, 7), (2, 5))


def test_packet_rejects_wrong_size():
    with pytest.raises(ValueError):
        packet((1, 2, 3), 3)


# ------------------------------------------------------------- SetSystem

def test_setsystem_json_roundtrip():
    ss = SetSystem(6, [(2, 4, 6), (2, 3, 5), (1, 3, 6)])
    text = ss.to_json()
    assert text == '{"n": 6, "sets": [[1, 3, 6], [2, 3, 5], [2, 4, 6]]}'
    assert SetSystem.from_json(text) == ss


def test_setsystem_rejects_duplicates_and_strays():
    with pytest.raises(ValueError):
        SetSystem(4, [(1, 2), (2, 1)])
    with pytest.raises(ValueError):
        SetSystem(3, [(4,)])


def test_colorset_rejects_bad_input():
    with pytest.raises(ValueError):
        colorset((1, 1))
    with pytest.raises(ValueError):
        colorset((0, 2))
