"""All connected graphs of small order, up to isomorphism.

Graphs on n vertices are grown from those on n - 1 by attaching a new vertex
to every non-empty neighbour set (every connected graph has a non-cut
vertex, so nothing is missed) and deduplicated by an exact canonical code.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Sequence

from .errors import CorpusMissing
from .graph import SignedGraph

BUILTIN_MAX_N = 7


def _refine(n: int, adj: Sequence[int]) -> list[list[int]]:
    """Ordered colour classes from iterated degree refinement.

    Cell order depends only on isomorphism-invariant signatures.
    """
    colour = [0] * n
    while True:
        sigs = [
            (colour[v], tuple(sorted(colour[w] for w in range(n) if adj[v] >> w & 1)))
            for v in range(n)
        ]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(set(new)) == len(set(colour)):
            break
        colour = new
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(colour[v], []).append(v)
    return [cells[c] for c in sorted(cells)]


def _code(n: int, adj: Sequence[int], order: Sequence[int]) -> int:
    code = 0
    for j in range(1, n):
        aj = adj[order[j]]
        for i in range(j):
            code = (code << 1) | (aj >> order[i] & 1)
    return code


def canonical_form(n: int, adj: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Smallest adjacency code over orderings that respect the refined cells.

    Returns ``(code, order)`` where ``order[i]`` is the vertex placed at
    position ``i``. Two graphs are isomorphic iff their codes match.
    """
    cells = _refine(n, adj)
    best = None
    for choice in product(*(permutations(c) for c in cells)):
        order = tuple(v for cell in choice for v in cell)
        code = _code(n, adj, order)
        if best is None or code < best[0]:
            best = (code, order)
    return best


def _from_masks(n: int, adj: Sequence[int]) -> SignedGraph:
    edges = tuple((u, v) for u in range(n) for v in range(u + 1, n) if adj[u] >> v & 1)
    return SignedGraph(n, edges, (1,) * len(edges))


def _masks(g: SignedGraph) -> list[int]:
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def canonical_graph(g: SignedGraph) -> SignedGraph:
    adj = _masks(g)
    _, order = canonical_form(g.n, adj)
    pos = {v: i for i, v in enumerate(order)}
    new = [0] * g.n
    for v in range(g.n):
        for w in range(g.n):
            if adj[v] >> w & 1:
                new[pos[v]] |= 1 << pos[w]
    return _from_masks(g.n, new)


@lru_cache(maxsize=None)
def _connected_codes(n: int) -> tuple[tuple[int, ...], ...]:
    if n == 1:
        return ((0,),)
    found: dict[int, tuple[int, ...]] = {}
    for adj in _connected_codes(n - 1):
        for nbrs in range(1, 1 << (n - 1)):
            grown = list(adj) + [nbrs]
            for u in range(n - 1):
                if nbrs >> u & 1:
                    grown[u] |= 1 << (n - 1)
            code, order = canonical_form(n, grown)
            if code in found:
                continue
            pos = {v: i for i, v in enumerate(order)}
            canon = [0] * n
            for v in range(n):
                for w in range(n):
                    if grown[v] >> w & 1:
                        canon[pos[v]] |= 1 << pos[w]
            found[code] = tuple(canon)
    return tuple(found[c] for c in sorted(found))


def connected_graphs(n: int) -> list[SignedGraph]:
    """Every connected graph of order n (n <= 7), canonically labelled, all-positive."""
    if n < 1:
        return []
    if n > BUILTIN_MAX_N:
        raise CorpusMissing(f"built-in corpus stops at n={BUILTIN_MAX_N}; supply a graph6 file")
    return [_from_masks(n, adj) for adj in _connected_codes(n)]
