"""Generators for named signed graphs and random instances."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .cycles import is_balanced
from .errors import InvalidEdge, TooSmall
from .graph import SignedGraph, make_signed_graph


def _edge_set(pairs: Iterable[Sequence[int]]) -> set[tuple[int, int]]:
    out = set()
    for u, v in pairs:
        u, v = int(u), int(v)
        out.add((u, v) if u < v else (v, u))
    return out


def gamma1(n: int) -> SignedGraph:
    """The unbalanced triangle on {0, 1, 2} glued to a positive clique on {2..n-1}.

    Edge 0-1 is the only negative edge; vertex 2 is the shared vertex.
    """
    if n < 5:
        raise TooSmall(f"gamma1 needs n >= 5, got {n}")
    triples = [(0, 1, -1), (0, 2, 1), (1, 2, 1)]
    triples += [(u, v, 1) for u, v in combinations(range(2, n), 2)]
    return make_signed_graph(n, triples)


def signed_cycle(length: int, negative_edges: Iterable[Sequence[int]] = ()) -> SignedGraph:
    """The cycle 0-1-...-(length-1)-0 with the listed edges negative."""
    if length < 3:
        raise InvalidEdge(f"a cycle needs at least 3 vertices, got {length}")
    ring = _edge_set((i, (i + 1) % length) for i in range(length))
    neg = _edge_set(negative_edges)
    if not neg <= ring:
        raise InvalidEdge(f"edges {sorted(neg - ring)} are not on the cycle")
    return make_signed_graph(length, ((u, v, -1 if (u, v) in neg else 1) for u, v in ring))


def signed_complete(n: int, negative_edges: Iterable[Sequence[int]] = ()) -> SignedGraph:
    neg = _edge_set(negative_edges)
    for u, v in neg:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise InvalidEdge(f"({u}, {v}) is not an edge of K_{n}")
    return make_signed_graph(
        n, ((u, v, -1 if (u, v) in neg else 1) for u, v in combinations(range(n), 2))
    )


def complete_graph(n: int) -> SignedGraph:
    return signed_complete(n)


def path_graph(n: int) -> SignedGraph:
    return make_signed_graph(n, ((i, i + 1, 1) for i in range(n - 1)))


def is_gamma1(g: SignedGraph) -> bool:
    """True iff g is switching isomorphic to gamma1(g.n), for any order.

    The underlying graph must be a clique on n-2 vertices plus two adjacent
    degree-2 vertices hanging off one clique vertex; the signature must make
    that triangle negative and the clique balanced.
    """
    n = g.n
    if n < 5 or g.e != (n - 2) * (n - 3) // 2 + 3:
        return False
    deg = g.degrees
    for a in range(n):
        if deg[a] != 2:
            continue
        for b in g.neighbors(a):
            if b <= a or deg[b] != 2:
                continue
            common = set(g.neighbors(a)) & set(g.neighbors(b))
            if len(common) != 1:
                continue
            (c,) = common
            if deg[c] != n - 1:
                continue
            rest = [v for v in range(n) if v not in (a, b)]
            if any(not g.has_edge(u, v) for u, v in combinations(rest, 2)):
                continue
            if g.sign(a, b) * g.sign(a, c) * g.sign(b, c) != -1:
                continue
            index = {v: i for i, v in enumerate(rest)}
            clique = make_signed_graph(
                len(rest), ((index[u], index[v], g.sign(u, v)) for u, v in combinations(rest, 2))
            )
            if is_balanced(clique):
                return True
    return False


def random_signed_graph(
    rng: np.random.Generator, n: int, p: float = 0.5, p_negative: float = 0.5
) -> SignedGraph:
    triples = []
    for u, v in combinations(range(n), 2):
        if rng.random() < p:
            triples.append((u, v, -1 if rng.random() < p_negative else 1))
    return make_signed_graph(n, triples)


def random_connected_signed_graph(
    rng: np.random.Generator, n: int, p: float = 0.5, p_negative: float = 0.5
) -> SignedGraph:
    """Rejection-sample G(n, p) with random signs until connected."""
    while True:
        g = random_signed_graph(rng, n, p, p_negative)
        if g.is_connected():
            return g
