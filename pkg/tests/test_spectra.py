import numpy as np
import pytest
from hypothesis import given, settings

from conftest import graph_and_switch, random_connected, signed_graphs
from oracles import eigenvalues_by_bracketing
from signed_spectra.constructions import complete_graph, gamma1, path_graph, signed_cycle
from signed_spectra.corpus import connected_graphs
from signed_spectra.errors import InvalidMoveEdge, PreconditionNotMet
from signed_spectra.graph import make_signed_graph, switch
from signed_spectra.spectra import (
    adjacency_matrix,
    adjacency_stack,
    apply_move,
    index,
    jacobi_eigh,
    lambda1,
    largest_eigenvalues,
    normalize_nonnegative,
    perturb_and_compare,
    zero_components,
)


def test_known_spectra():
    assert np.isclose(lambda1(complete_graph(5)), 4.0, atol=1e-12)
    assert np.isclose(lambda1(signed_cycle(3, [(0, 1)])), 1.0, atol=1e-12)
    assert np.isclose(lambda1(path_graph(3)), np.sqrt(2), atol=1e-12)
    assert np.isclose(lambda1(gamma1(5)), np.sqrt(5), atol=1e-12)
    # an unbalanced 4-cycle has spectrum +-sqrt(2) twice
    res = index(signed_cycle(4, [(0, 1)]))
    assert np.allclose(res.full_spectrum, [np.sqrt(2)] * 2 + [-np.sqrt(2)] * 2, atol=1e-12)


def test_empty_graph_spectrum():
    res = index(make_signed_graph(3, []))
    assert res.lambda1 == 0.0 and res.residual_ok()


@settings(max_examples=100)
@given(signed_graphs(min_n=1, max_n=12))
def test_jacobi_matches_lapack(g):
    a = adjacency_matrix(g)
    vals, vecs = jacobi_eigh(a)
    assert np.allclose(vals, np.sort(np.linalg.eigvalsh(a))[::-1], atol=1e-10)
    assert np.allclose(a @ vecs, vecs * vals, atol=1e-9)
    assert np.allclose(vecs.T @ vecs, np.eye(g.n), atol=1e-10)


def test_jacobi_stack_and_largest(rng):
    edges = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (0, 4)]
    signs = rng.choice([-1.0, 1.0], size=(50, len(edges)))
    mats = adjacency_stack(5, edges, signs)
    want = np.linalg.eigvalsh(mats)[:, -1]
    assert np.allclose(largest_eigenvalues(mats, chunk=7), want, atol=1e-12)


def test_power_iteration_path(rng):
    g = random_connected(rng, 70, 70, 0.2, 0.2)
    res = index(g)
    assert res.residual_ok()
    assert np.isclose(res.lambda1, np.linalg.eigvalsh(adjacency_matrix(g))[-1], atol=1e-8)


@settings(max_examples=100)
@given(graph_and_switch(max_n=10))
def test_switching_is_diagonal_similarity(gs):
    g, s = gs
    d = np.diag([-1.0 if v in s else 1.0 for v in range(g.n)])
    h = switch(g, s)
    assert np.array_equal(adjacency_matrix(h), d @ adjacency_matrix(g) @ d)
    assert np.allclose(index(g).full_spectrum, index(h).full_spectrum, atol=1e-10)


@settings(max_examples=100)
@given(signed_graphs(max_n=10))
def test_dominated_by_underlying_graph(g):
    assert lambda1(g) <= lambda1(g.underlying()) + 1e-10


def _corpus_upto(n_max):
    for n in range(1, n_max + 1):
        yield from connected_graphs(n)


def test_charpoly_oracle_on_small_signed_graphs(rng):
    for g in _corpus_upto(5):
        for _ in range(3):
            signs = tuple(int(s) for s in rng.choice([-1, 1], size=g.e))
            h = make_signed_graph(g.n, [(u, v, s) for (u, v), s in zip(g.edges, signs)])
            want = eigenvalues_by_bracketing(adjacency_matrix(h).astype(int).tolist())
            assert np.allclose(index(h).full_spectrum, want, atol=1e-8)


@settings(max_examples=60)
@given(signed_graphs(min_n=2, max_n=9, connected=True))
def test_normalize_gives_nonnegative_eigenvector(g):
    h, res = normalize_nonnegative(g)
    assert np.all(res.eigvec >= -1e-9)
    assert np.isclose(res.lambda1, lambda1(g), atol=1e-10)
    a = adjacency_matrix(h)
    assert np.allclose(a @ res.eigvec, res.lambda1 * res.eigvec, atol=1e-8)
    assert h.edges == g.edges


def test_zero_components():
    # a star K_{1,2} plus one isolated vertex
    g = make_signed_graph(4, [(0, 1, 1), (0, 2, 1)])
    _, res = normalize_nonnegative(g)
    assert zero_components(res) == 1


def test_apply_move_errors():
    g = gamma1(5)
    with pytest.raises(InvalidMoveEdge):
        apply_move(g, "add_positive_edges", [(2, 3)])
    with pytest.raises(InvalidMoveEdge):
        apply_move(g, "remove_negative_edges", [(2, 3)])
    with pytest.raises(ValueError):
        apply_move(g, "teleport", [(0, 1)])


def test_perturbation_examples():
    g, _ = normalize_nonnegative(gamma1(6))
    neg = g.negative_edges
    assert len(neg) == 1
    for move, edges in (("remove_negative_edges", neg), ("negate_negative_edges", neg),
                        ("add_positive_edges", [(0, 3)])):
        p = perturb_and_compare(g, move, edges)
        assert p.delta > 0 and p.strict


def test_perturbation_requires_normalization():
    g = switch(gamma1(6), {3, 4})
    with pytest.raises(PreconditionNotMet):
        perturb_and_compare(g, "add_positive_edges", [(0, 3)])
