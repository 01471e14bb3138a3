import numpy as np
import pytest
from hypothesis import given, settings

from conftest import graph_and_switch, signed_graphs
from oracles import (
    balanced_brute,
    frustration_by_deletion,
    negative_cycle_lengths_brute,
    negative_girth_brute,
)
from signed_spectra.constructions import (
    complete_graph,
    gamma1,
    random_signed_graph,
    signed_complete,
    signed_cycle,
)
from signed_spectra.cycles import (
    apply_frustration_witness,
    count_negative,
    cycle_sign,
    double_cover,
    frustration_index,
    has_negative_cycle_of_length,
    has_signed_path,
    is_balanced,
    negative_girth,
    shortest_negative_cycle,
)
from signed_spectra.errors import CapExceeded, NotACycle, TooLargeForExact
from signed_spectra.graph import make_signed_graph, switch


def test_balanced_examples():
    assert is_balanced(signed_cycle(4, [(0, 1), (2, 3)]))
    assert not is_balanced(signed_cycle(3, [(0, 1)]))
    assert is_balanced(make_signed_graph(4, []))
    # a forest is balanced whatever its signs
    assert is_balanced(make_signed_graph(4, [(0, 1, -1), (1, 2, -1), (2, 3, 1)]))


@settings(max_examples=150)
@given(signed_graphs(max_n=7))
def test_balance_matches_brute_force(g):
    assert is_balanced(g) == balanced_brute(g)
    assert is_balanced(g) == (negative_girth(g) is None)


def test_cycle_sign():
    g = signed_complete(4, [(0, 1)])
    assert cycle_sign(g, [0, 1, 2]) == -1
    assert cycle_sign(g, [1, 2, 3]) == 1
    with pytest.raises(NotACycle):
        cycle_sign(signed_cycle(4), [0, 2, 1])
    with pytest.raises(NotACycle):
        cycle_sign(g, [0, 1, 0])


def test_double_cover_shape():
    g = signed_cycle(3, [(0, 1)])
    cover = double_cover(g)
    assert cover.n == 6 and cover.e == 6
    # the lift of an unbalanced triangle is a hexagon
    assert cover.is_connected()
    assert not double_cover(signed_cycle(3)).is_connected()


def test_girth_examples():
    assert negative_girth(signed_cycle(5, [(0, 1)])) == 5
    assert negative_girth(signed_cycle(5)) is None
    assert negative_girth(gamma1(8)) == 3
    w = shortest_negative_cycle(gamma1(8))
    assert w.length == 3 and w.sign == -1 and w.is_valid_in(gamma1(8))


def test_girth_matches_brute_force_on_random_graphs(rng):
    for _ in range(500):
        n = int(rng.integers(1, 9))
        g = random_signed_graph(rng, n, float(rng.uniform(0.2, 0.9)), float(rng.uniform(0, 1)))
        expected = negative_girth_brute(g)
        assert negative_girth(g) == expected
        w = shortest_negative_cycle(g)
        if expected is None:
            assert w is None
        else:
            assert w.length == expected and w.sign == -1 and w.is_valid_in(g)


@settings(max_examples=100)
@given(signed_graphs(max_n=7))
def test_fixed_length_matches_brute_force(g):
    lengths = negative_cycle_lengths_brute(g)
    for r in range(3, g.n + 1):
        res = has_negative_cycle_of_length(g, r)
        assert bool(res) == (r in lengths)
        if res:
            assert res.witness.length == r and res.witness.sign == -1
            assert res.witness.is_valid_in(g)


def test_fixed_length_out_of_range():
    g = signed_cycle(4, [(0, 1)])
    assert not has_negative_cycle_of_length(g, 2)
    assert not has_negative_cycle_of_length(g, 5)
    assert has_negative_cycle_of_length(g, 4)


def test_gamma1_has_only_triangle_negative_cycles():
    # the single negative edge lies only in triangles through vertex 2
    g = gamma1(12)
    assert has_negative_cycle_of_length(g, 3)
    for r in range(4, 13):
        assert not has_negative_cycle_of_length(g, r)


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        has_negative_cycle_of_length(complete_graph(14), 14, cap=1000)


def test_signed_path():
    g = signed_cycle(5, [(0, 1)])
    path = has_signed_path(g, 0, 4, 4, -1)
    assert path == [0, 1, 2, 3, 4]
    assert has_signed_path(g, 0, 4, 4, 1) is None
    assert has_signed_path(g, 0, 4, 3, -1) is None


@settings(max_examples=150)
@given(graph_and_switch(max_n=8))
def test_cycle_invariants_under_switching(gs):
    g, s = gs
    h = switch(g, s)
    assert negative_girth(g) == negative_girth(h)
    assert is_balanced(g) == is_balanced(h)
    assert frustration_index(g).epsilon == frustration_index(h).epsilon


def test_frustration_examples():
    assert frustration_index(signed_complete(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])).epsilon == 2
    assert frustration_index(signed_cycle(5, [(0, 1), (1, 2), (2, 3)])).epsilon == 1
    assert frustration_index(make_signed_graph(3, [])).epsilon == 0


def test_frustration_matches_deletion_oracle(rng):
    done = 0
    while done < 100:
        n = int(rng.integers(2, 9))
        g = random_signed_graph(rng, n, float(rng.uniform(0.2, 0.8)), float(rng.uniform(0, 1)))
        if g.e > 14:
            continue
        res = frustration_index(g)
        assert res.epsilon == frustration_by_deletion(g)
        assert count_negative(apply_frustration_witness(g, res)) == res.epsilon
        done += 1


def test_frustration_cap():
    with pytest.raises(TooLargeForExact):
        frustration_index(make_signed_graph(25, [(0, 1, -1)]))


def test_frustration_at_large_n_is_consistent():
    g = gamma1(16)
    res = frustration_index(g)
    assert res.epsilon == 1
    assert np.isclose(count_negative(apply_frustration_witness(g, res)), 1)
