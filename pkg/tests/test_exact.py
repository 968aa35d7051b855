from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import hypergraphs
from oracles import brute_count, brute_matchings
from hypermatch import guards
from hypermatch.exact import (
    bits,
    build_transition_graph,
    count_matchings,
    distribution_after,
    enumerate_matchings,
    to_mask,
    tv_curve,
    tv_distance,
)
from hypermatch.hypergraph import Hypergraph, hypergraph_from


@pytest.mark.parametrize(
    "edges, expected",
    [
        ([], 1),
        ([(1, 2, 3)], 2),
        ([(1, 2, 3), (3, 4, 5)], 3),
        ([(1, 2, 3), (4, 5, 6)], 4),
        ([(1, 2, 3), (3, 4, 5), (5, 6, 7)], 5),
    ],
)
def test_small_counts(edges, expected):
    H = hypergraph_from(edges, k=3, n=7)
    assert count_matchings(H) == expected == brute_count(edges)


def test_three_comb_count(comb):
    # empty, four singletons, three pairs among the teeth, the full tooth triple
    assert count_matchings(comb) == 9


def test_enumeration_order(path3):
    got = [m.to_list() for m in enumerate_matchings(path3)]
    assert got == [[], [0], [1], [2], [0, 2]]


def test_bits_round_trip():
    assert bits(0b10110) == [1, 2, 4]
    assert to_mask([1, 2, 4]) == 0b10110


def test_count_guard():
    H = Hypergraph(130, 2, tuple((2 * i + 1, 2 * i + 2) for i in range(65)))
    with pytest.raises(guards.GuardError):
        count_matchings(H)
    assert count_matchings(H, max_edges=None) == 2**65


def test_large_disjoint_count_is_a_big_integer():
    H = Hypergraph(120, 2, tuple((2 * i + 1, 2 * i + 2) for i in range(60)))
    assert count_matchings(H) == 2**60


@settings(max_examples=150)
@given(hypergraphs(max_n=10, max_m=8))
def test_count_matches_brute_force(H):
    edges = list(H.edges)
    expected = brute_matchings(edges)
    assert count_matchings(H) == len(expected)
    got = enumerate_matchings(H)
    assert len(got) == len(expected)
    assert {tuple(m.to_list()) for m in got} == set(expected)


def test_single_edge_transitions(single):
    T = build_transition_graph(single)
    assert T.size == 2
    assert T.probability(0, 1) == T.probability(1, 0) == Fraction(1, 2)
    assert T.probability(0, 0) == Fraction(1, 2)


def test_two_intersecting_edges():
    H = hypergraph_from([(1, 2, 3), (3, 4, 5)])
    T = build_transition_graph(H)
    assert T.size == 3
    empty, a, b = 0, T.state_index([0]), T.state_index([1])
    q = Fraction(1, 4)
    # swap between the two singletons is a legal move
    assert T.probability(a, b) == q == T.probability(empty, a)
    assert T.probability(empty, empty) == Fraction(1, 2)
    assert T.transition_count() == 6


@settings(max_examples=60)
@given(hypergraphs(max_n=9, max_m=6))
def test_transition_matrix_invariants(H):
    if H.m == 0:
        return
    T = build_transition_graph(H)
    N = T.size
    q = Fraction(1, 2 * H.m)
    cols = [Fraction(0)] * N
    for i in range(N):
        row = T.exact_row(i)
        assert sum(row.values()) == 1
        assert row[i] >= Fraction(1, 2)
        for j, p in row.items():
            cols[j] += p
            if j != i:
                assert p == q and T.probability(j, i) == p
    assert all(c == 1 for c in cols)
    D = T.dense()
    assert np.allclose(D, D.T)


def test_distribution_after_and_tv(single):
    T = build_transition_graph(single)
    # with m = 1 the move probability is 1/2, so one step already reaches uniform
    assert np.allclose(distribution_after(T, 1), [0.5, 0.5])
    assert np.allclose(tv_curve(T, 3), [0.5, 0, 0, 0])


def test_tv_curve_decreases_on_path(path3):
    T = build_transition_graph(path3)
    curve = tv_curve(T, 40)
    assert curve[0] == pytest.approx(1 - 1 / 5)
    assert np.all(np.diff(curve) <= 1e-15)
    u = np.full(T.size, 1 / T.size)
    assert tv_distance(distribution_after(T, 40), u) == pytest.approx(curve[40])


def test_tv_distance_examples():
    assert tv_distance([0.5, 0.5], [0.7, 0.3]) == pytest.approx(0.2)
    N = 8
    assert tv_distance([1.0] + [0.0] * (N - 1), [1 / N] * N) == pytest.approx(1 - 1 / N)
    with pytest.raises(ValueError):
        tv_distance([1.0], [0.5, 0.5])
    with pytest.raises(ValueError):
        tv_distance([0.6, 0.6], [0.5, 0.5])
