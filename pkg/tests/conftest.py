import sys
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from signed_spectra.constructions import random_connected_signed_graph  # noqa: E402
from signed_spectra.graph import SignedGraph, make_signed_graph  # noqa: E402


@st.composite
def signed_graphs(draw, min_n=1, max_n=8, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    if connected and n > 1:
        # a random spanning tree guarantees connectivity
        order = draw(st.permutations(range(n)))
        tree = {tuple(sorted((order[i], order[draw(st.integers(0, i - 1))]))) for i in range(1, n)}
    else:
        tree = set()
    chosen = [uv for uv in pairs if uv in tree or draw(st.booleans())]
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=len(chosen), max_size=len(chosen)))
    return make_signed_graph(n, [(u, v, s) for (u, v), s in zip(chosen, signs)])


@st.composite
def graph_and_switch(draw, **kw):
    g = draw(signed_graphs(**kw))
    members = draw(st.sets(st.integers(0, g.n - 1)))
    return g, members


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_connected(rng, lo, hi, p_lo=0.3, p_hi=0.9) -> SignedGraph:
    n = int(rng.integers(lo, hi + 1))
    return random_connected_signed_graph(rng, n, float(rng.uniform(p_lo, p_hi)),
                                         float(rng.uniform(0.0, 1.0)))
