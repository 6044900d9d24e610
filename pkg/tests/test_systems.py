import itertools
from math import comb

import pytest

from zonocube.bruhat import enumerate_cubillages
from zonocube.colors import is_r_separated, packet, subsets
from zonocube.cubillage import antistandard, boundary_plates, standard, validate
from zonocube.order import (
    apply_flip,
    enumerate_stacks,
    membrane_of_stack,
    plate_vertices,
)
from zonocube.systems import (
    AdmissibleOrder,
    extension_search,
    from_consistent,
    from_order,
    from_spectra,
    inversions,
    is_consistent,
    order_of,
    weak_separation_suite,
)

CLOCK = [(2, 4), (2, 4, 5), (2, 5), (2, 3, 5), (3, 5), (1, 3, 5), (1, 3, 5, 6),
         (1, 3, 6), (1, 3, 4, 6), (1, 4, 6), (1, 2, 4, 6), (2, 4, 6)]


def crange(n):
    return tuple(range(1, n + 1))


def all_subsets(n):
    return [tuple(s) for k in range(n + 1) for s in itertools.combinations(crange(n), k)]


# -------------------------------------------------------------- inversions

def test_inversions_extremes():
    for n, d in ((4, 2), (5, 3), (6, 2)):
        full = {tuple(t) for t in subsets(crange(n), d + 1)}
        assert inversions(standard(crange(n), d)) == frozenset()
        assert inversions(antistandard(crange(n), d)) == full


def test_single_flip_inversion():
    q = apply_flip(standard((1, 2, 3), 2), (1, 2, 3))
    assert inversions(q) == {(1, 2, 3)}


def test_inversions_injective_and_match_packet_directions():
    seen = set()
    for q in enumerate_cubillages(4, 2):
        inv = inversions(q)
        assert inv not in seen
        seen.add(inv)
        order = order_of(q)
        for parent in subsets(crange(4), 3):
            expected = "antilex" if tuple(parent) in inv else "lex"
            assert order.packet_direction(parent) == expected


# -------------------------------------------------------- admissible order

def test_order_of_standard_is_lex_chain():
    order = order_of(standard((1, 2, 3), 2))
    assert order.leq((1, 2), (1, 3)) and order.leq((1, 3), (2, 3))
    assert not order.leq((2, 3), (1, 2))
    assert order.packet_direction((1, 2, 3)) == "lex"


def test_order_of_injective():
    orders = {order_of(q) for q in enumerate_cubillages(4, 2)}
    assert len(orders) == 8


def test_admissible_order_rejects_non_admissible():
    # only the pair 12<13 given: packet {1,2,3} is not a chain
    with pytest.raises(ValueError):
        AdmissibleOrder((1, 2, 3), 2, [((1, 2), (1, 3))])


def test_admissible_order_rejects_cycle():
    rels = [((1, 2), (1, 3)), ((1, 3), (2, 3)), ((2, 3), (1, 2))]
    with pytest.raises(ValueError):
        AdmissibleOrder((1, 2, 3), 2, rels)


def test_admissible_order_json_roundtrip():
    order = order_of(standard(crange(4), 2))
    again = AdmissibleOrder.from_json(order.to_json())
    assert again == order


# ------------------------------------------------------------- from_order

def test_from_order_roundtrip():
    for q in enumerate_cubillages(4, 2):
        assert from_order(order_of(q)) == q


def test_from_order_lex_everywhere_gives_standard():
    chains = []
    for parent in subsets(crange(4), 3):
        chain = packet(parent, 2)
        chains.extend(zip(chain, chain[1:]))
    order = AdmissibleOrder(crange(4), 2, chains)
    assert from_order(order) == standard(crange(4), 2)


def test_linear_extension_reconstructs_same_cubillage():
    for q in enumerate_cubillages(4, 2):
        base = order_of(q)
        chain = base.linear_extension()
        linear = AdmissibleOrder(crange(4), 2, list(zip(chain, chain[1:])))
        assert linear.extends(base)
        assert from_order(linear) == q


# ------------------------------------------------------------- consistency

def test_consistency_trivial_cases():
    assert is_consistent([], 4)
    assert is_consistent(list(subsets(crange(4), 2)), 4)
    assert is_consistent([(1, 2, 3)], 4)


def test_consistency_mixed_sizes_rejected():
    with pytest.raises(ValueError):
        is_consistent([(1, 2), (1, 2, 3)], 4)


def test_inversions_of_cubillages_and_membranes_are_consistent():
    for n, d in ((4, 2), (5, 3)):
        for q in enumerate_cubillages(n, d):
            assert is_consistent(inversions(q), n)
            for stack in enumerate_stacks(q):
                assert is_consistent(stack, n)


def test_consistent_subsets_of_gr42_are_the_24_membranes():
    gr = [tuple(t) for t in subsets(crange(4), 2)]
    consistent = []
    for k in range(len(gr) + 1):
        for sub in itertools.combinations(gr, k):
            if is_consistent(sub, 4):
                consistent.append(frozenset(sub))
    assert len(consistent) == 24  # cubillages of Z(4,1), i.e. 4! chain orders


def test_from_consistent_extremes():
    w = from_consistent([], 4, 2)
    assert w.plates == boundary_plates(crange(4), 2, "front")
    w2 = from_consistent(list(subsets(crange(4), 2)), 4, 2)
    assert w2.plates == boundary_plates(crange(4), 2, "back")


def test_from_consistent_exhaustive_roundtrip():
    gr = [tuple(t) for t in subsets(crange(4), 2)]
    for k in range(len(gr) + 1):
        for sub in itertools.combinations(gr, k):
            if not is_consistent(sub, 4):
                continue
            w = from_consistent(sub, 4, 2)
            assert validate(w.ambient) is None
            assert w.stack == frozenset(sub)
            assert inversions(w.projected) == frozenset(sub)


def test_from_consistent_d1():
    w = from_consistent([(2,), (4,)], 4, 1)
    assert w.stack == {(2,), (4,)}
    assert validate(w.ambient) is None


def test_from_consistent_rejects_inconsistent():
    # {13} meets the packet of {1,2,3} in its middle member only
    assert not is_consistent([(1, 3)], 4)
    with pytest.raises(ValueError):
        from_consistent([(1, 3)], 4, 2)


# ------------------------------------------------------------ from_spectra

def test_from_spectra_roundtrip():
    for n, d in ((4, 2), (5, 3)):
        for q in enumerate_cubillages(n, d):
            assert from_spectra(q.vertices(), crange(n), d) == q


def test_from_spectra_intervals_give_standard():
    for n in (3, 4, 5):
        intervals = {tuple(range(i, j + 1)) for i in crange(n) for j in range(i, n + 1)}
        intervals.add(())
        assert from_spectra(intervals, crange(n)) == standard(crange(n), 2)


def test_from_spectra_size_bound():
    for n, d in ((4, 2), (5, 3)):
        for q in enumerate_cubillages(n, d):
            assert len(q.vertices()) == sum(comb(n, k) for k in range(d + 1))
    with pytest.raises(ValueError):
        from_spectra([(1,), (2,)], (1, 2), 1)  # wrong size


def test_from_spectra_rejects_unseparated():
    sets = {(), (1,), (2,), (3,), (1, 3), (2, 3), (1, 2, 3)}  # 13 vs 2 not 1-separated
    with pytest.raises(ValueError):
        from_spectra(sets, (1, 2, 3), 2)


# ------------------------------------------------------- extension search

def test_clock_triple_is_maximal_at_55():
    report = extension_search([(2, 4, 6), (2, 3, 5), (1, 3, 6)], 6, 4, "certify-maximal")
    assert report.bound == 57
    assert report.maximal_sizes == (55,)
    assert not report.completable
    assert report.gap == 2  # matches the d/2 gap reading for d=4


def test_five_consecutive_clock_sets_complete():
    sets = [(2, 4), (2, 4, 5), (2, 5), (2, 3, 5), (3, 5)]
    report = extension_search(sets, 6, 4, "complete")
    assert report.completable
    assert len(report.completion) == 57
    q = from_spectra(report.completion, crange(6), 4)
    assert validate(q) is None


def test_every_separated_pair_completes():
    for n, d in ((5, 2), (6, 4)):
        universe = all_subsets(n)
        for a, b in itertools.combinations(universe, 2):
            if is_r_separated(a, b, d - 1):
                assert extension_search([a, b], n, d, "complete").completable


def test_singletons_complete():
    for n, d in ((5, 2), (6, 3), (6, 4)):
        for x in all_subsets(n):
            assert extension_search([x], n, d, "complete").completable


def test_extension_search_rejects_unseparated_input():
    with pytest.raises(ValueError):
        extension_search([(1, 3, 5), (2, 4, 6)], 6, 4, "complete")
    with pytest.raises(ValueError):
        extension_search([(1,)], 4, 2, "other-mode")


def test_lifted_nonpurity():
    triple = [(2, 4, 6), (2, 3, 5), (1, 3, 6)]
    assert not extension_search(triple, 7, 4, "complete").completable
    lifted = triple + [tuple(sorted(t + (7,))) for t in triple]
    assert not extension_search(lifted, 7, 5, "complete").completable


# --------------------------------------------------------- weak separation

def test_weak_suite_bounds():
    for n in range(1, 7):
        for k in (1, 3):
            report = weak_separation_suite(n, k)
            assert report["max_size"] <= report["bound"]
            assert report["meets_bound"]


def test_weak_witness_triple_maximal_at_55():
    from zonocube.colors import is_weakly_k_separated

    triple = [(2, 5), (1, 3, 5, 6), (1, 2, 4, 6)]
    for a, b in itertools.combinations(triple, 2):
        assert is_r_separated(a, b, 3)
    blockers = [x for x in CLOCK if x not in triple]
    addable = [x for x in blockers
               if all(is_weakly_k_separated(x, t, 3) for t in triple)]
    assert addable == []  # 52 peripheral + 3 = 55, not extendable further


def test_strong_counterexample_extends_weakly():
    from zonocube.colors import is_weakly_k_separated

    triple = [(2, 4, 6), (2, 3, 5), (1, 3, 6)]
    addable = [x for x in CLOCK if x not in triple
               and all(is_weakly_k_separated(x, t, 3) for t in triple)]
    assert addable == [(2, 4, 5), (1, 4, 6)]
    group = triple + addable
    for a, b in itertools.combinations(group, 2):
        assert is_weakly_k_separated(a, b, 3)


def test_weak_suite_rejects_even_k():
    with pytest.raises(ValueError):
        weak_separation_suite(5, 2)


# ------------------------------------------------------------ prop 19 style

def test_nested_membrane_spectra_union_separated():
    # membranes of Z(4,2) with nested inversion systems have jointly
    # 1-separated spectra
    membranes = {}
    for q in enumerate_cubillages(4, 2):
        for stack in enumerate_stacks(q):
            inv = frozenset(stack)
            if inv not in membranes:
                membranes[inv] = plate_vertices(membrane_of_stack(q, stack))
    items = sorted(membranes.items(), key=lambda kv: sorted(kv[0]))
    for (inv1, sp1), (inv2, sp2) in itertools.combinations(items, 2):
        if inv1 <= inv2 or inv2 <= inv1:
            for a, b in itertools.combinations(sorted(sp1 | sp2), 2):
                assert is_r_separated(a, b, 1)
