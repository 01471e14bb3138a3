import io

import networkx as nx
import pytest
from hypothesis import given

from conftest import signed_graphs
from signed_spectra.constructions import path_graph
from signed_spectra.corpus import canonical_graph, connected_graphs
from signed_spectra.errors import CorpusMissing, ParseError
from signed_spectra.graph import relabel
from signed_spectra.graph6 import (
    decode,
    encode,
    format_signed,
    parse_signed,
    read_graph6,
    write_graph6,
)


def _to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


@given(signed_graphs(max_n=10))
def test_encode_matches_networkx(g):
    want = nx.to_graph6_bytes(_to_nx(g), header=False).decode().strip()
    assert encode(g) == want


@given(signed_graphs(max_n=10))
def test_signed_round_trip(g):
    assert parse_signed(format_signed(g)) == g
    assert decode(encode(g)) == g.underlying()


def test_large_n_header():
    g = decode(encode(path_graph(70)))
    assert g.n == 70 and g.e == 69


def test_header_and_stream():
    assert decode(">>graph6<<Bw").e == 3
    buf = io.StringIO()
    write_graph6([decode("Bw"), decode("C~")], buf)
    got = list(read_graph6(io.StringIO("# comment\n" + buf.getvalue() + "\n")))
    assert [g.e for g in got] == [3, 6]


@pytest.mark.parametrize("bad", ["", "B", "Bww", "B\x7f", "Bw +", "Bw ++x"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_signed(bad)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 2), (4, 6), (5, 21), (6, 112), (7, 853)])
def test_connected_counts(n, count):
    assert len(connected_graphs(n)) == count


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_corpus_matches_graph_atlas(n):
    atlas = [h for h in nx.graph_atlas_g() if h.number_of_nodes() == n and nx.is_connected(h)]
    ours = [_to_nx(g) for g in connected_graphs(n)]
    assert len(atlas) == len(ours)
    # pairwise non-isomorphic with matching edge-count histograms
    assert sorted(h.number_of_edges() for h in atlas) == sorted(h.number_of_edges() for h in ours)
    if n <= 6:
        for h in atlas:
            assert sum(nx.is_isomorphic(h, o) for o in ours) == 1


def test_corpus_missing():
    with pytest.raises(CorpusMissing):
        connected_graphs(8)


def test_canonical_graph_is_invariant(rng):
    for g in connected_graphs(6)[::7]:
        perm = [int(x) for x in rng.permutation(6)]
        assert canonical_graph(relabel(g, perm)) == canonical_graph(g)
