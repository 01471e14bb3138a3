"""Signed graph data model, switching and switching equivalence.

Vertices are the integers ``0..n-1`` and signs are the integers ``+1`` / ``-1``.
A :class:`SignedGraph` is immutable; every operation returns a new graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    DuplicateEdge,
    InvalidSign,
    InvalidSwitchSet,
    LoopEdge,
    ParseError,
    TooLarge,
    VertexOutOfRange,
)

Edge = tuple[int, int]

ISOMORPHISM_MAX_N = 10


@dataclass(frozen=True)
class SignedGraph:
    """A simple graph with a sign on every edge.

    ``edges`` is sorted lexicographically with ``u < v`` in each pair and
    ``signs[i]`` is the sign of ``edges[i]``. Build instances through
    :func:`make_signed_graph` unless the input is already canonical.
    """

    n: int
    edges: tuple[Edge, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise VertexOutOfRange(f"vertex count must be >= 1, got {self.n}")
        if len(self.edges) != len(self.signs):
            raise ValueError("edges and signs differ in length")
        prev = None
        for (u, v), s in zip(self.edges, self.signs):
            if u == v:
                raise LoopEdge(f"loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise VertexOutOfRange(f"edge ({u}, {v}) invalid for n={self.n}")
            if s not in (1, -1):
                raise InvalidSign(f"sign {s!r} on edge ({u}, {v})")
            if prev is not None and (u, v) <= prev:
                if (u, v) == prev:
                    raise DuplicateEdge(f"duplicate edge ({u}, {v})")
                raise ValueError("edges are not in canonical order")
            prev = (u, v)

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def sign_map(self) -> dict[Edge, int]:
        return dict(zip(self.edges, self.signs))

    def sign(self, u: int, v: int) -> int:
        """Sign of edge ``uv``, or 0 when ``u`` and ``v`` are not adjacent."""
        if u > v:
            u, v = v, u
        return self.sign_map.get((u, v), 0)

    def has_edge(self, u: int, v: int) -> bool:
        return self.sign(u, v) != 0

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @cached_property
    def neighbor_masks(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Per-vertex bitmasks of positive and negative neighbours."""
        pos = [0] * self.n
        neg = [0] * self.n
        for (u, v), s in zip(self.edges, self.signs):
            target = pos if s > 0 else neg
            target[u] |= 1 << v
            target[v] |= 1 << u
        return tuple(pos), tuple(neg)

    @property
    def negative_edges(self) -> tuple[Edge, ...]:
        return tuple(uv for uv, s in zip(self.edges, self.signs) if s < 0)

    def underlying(self) -> "SignedGraph":
        """The all-positive graph on the same edge set."""
        return SignedGraph(self.n, self.edges, (1,) * self.e)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.n
        comps = []
        for root in range(self.n):
            if seen[root]:
                continue
            seen[root] = True
            comp = [root]
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def is_connected(self) -> bool:
        return len(self.components) == 1

    def __str__(self) -> str:
        return to_line(self)


@dataclass(frozen=True)
class SwitchSet:
    """A vertex subset; switching negates every edge with one end inside."""

    members: frozenset[int] = field(default_factory=frozenset)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "SwitchSet":
        return cls(frozenset(int(v) for v in vertices))

    @classmethod
    def from_mask(cls, mask: int) -> "SwitchSet":
        members = []
        v = 0
        while mask:
            if mask & 1:
                members.append(v)
            mask >>= 1
            v += 1
        return cls(frozenset(members))

    @property
    def mask(self) -> int:
        m = 0
        for v in self.members:
            m |= 1 << v
        return m

    def __contains__(self, v) -> bool:
        return v in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def symmetric_difference(self, other: "SwitchSet") -> "SwitchSet":
        return SwitchSet(self.members ^ other.members)


def make_signed_graph(n: int, signed_edges: Iterable[Sequence[int]]) -> SignedGraph:
    """Validate ``(u, v, sign)`` triples and build a canonical graph."""
    if n < 1:
        raise VertexOutOfRange(f"vertex count must be >= 1, got {n}")
    table: dict[Edge, int] = {}
    for item in signed_edges:
        u, v, s = item
        u, v, s = int(u), int(v), int(s)
        if u == v:
            raise LoopEdge(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) invalid for n={n}")
        if s not in (1, -1):
            raise InvalidSign(f"sign {s!r} on edge ({u}, {v})")
        key = (u, v) if u < v else (v, u)
        if key in table:
            raise DuplicateEdge(f"duplicate edge {key}")
        table[key] = s
    edges = tuple(sorted(table))
    return SignedGraph(n, edges, tuple(table[uv] for uv in edges))


def from_sign_map(n: int, sign_map: dict[Edge, int]) -> SignedGraph:
    return make_signed_graph(n, ((u, v, s) for (u, v), s in sign_map.items()))


def _as_switch_set(g: SignedGraph, s) -> SwitchSet:
    if not isinstance(s, SwitchSet):
        s = SwitchSet.of(s)
    for v in s.members:
        if not 0 <= v < g.n:
            raise InvalidSwitchSet(f"vertex {v} not in graph of order {g.n}")
    return s


def switch(g: SignedGraph, s) -> SignedGraph:
    """Negate the sign of every edge with exactly one endpoint in ``s``."""
    s = _as_switch_set(g, s)
    inside = s.members
    signs = tuple(
        -sg if ((u in inside) != (v in inside)) else sg
        for (u, v), sg in zip(g.edges, g.signs)
    )
    return SignedGraph(g.n, g.edges, signs)


def relabel(g: SignedGraph, perm: Sequence[int]) -> SignedGraph:
    """Move vertex ``v`` to ``perm[v]``."""
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm is not a permutation of the vertex set")
    return make_signed_graph(
        g.n, ((perm[u], perm[v], s) for (u, v), s in zip(g.edges, g.signs))
    )


def tree_potential(g: SignedGraph) -> tuple[int, ...]:
    """0/1 potential making the BFS spanning-forest edges all positive.

    Switching at ``{v : potential[v] == 1}`` turns every tree edge positive.
    Roots are the smallest vertex of each component and get potential 0.
    """
    pot = [-1] * g.n
    for root in range(g.n):
        if pot[root] >= 0:
            continue
        pot[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if pot[w] < 0:
                    pot[w] = pot[u] ^ (g.sign(u, w) < 0)
                    queue.append(w)
    return tuple(pot)


def tree_normalize(g: SignedGraph) -> tuple[SignedGraph, SwitchSet]:
    """The representative of g's switching class with a positive spanning forest."""
    pot = tree_potential(g)
    s = SwitchSet.of(v for v, p in enumerate(pot) if p)
    return switch(g, s), s


@dataclass(frozen=True)
class Equivalence:
    """Outcome of a switching-equivalence test; truthy when equivalent."""

    equivalent: bool
    witness: Optional[SwitchSet] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.equivalent


def is_switching_equivalent(g1: SignedGraph, g2: SignedGraph) -> Equivalence:
    """Decide whether ``g2 = switch(g1, S)`` for some S, returning S if so.

    Both graphs are normalised so that a common spanning forest is positive;
    they are equivalent exactly when the normalised signatures coincide.
    """
    if g1.n != g2.n or g1.edges != g2.edges:
        return Equivalence(False, None, "underlying-mismatch")
    n1, s1 = tree_normalize(g1)
    n2, s2 = tree_normalize(g2)
    if n1.signs != n2.signs:
        return Equivalence(False, None, "cotree-signs-differ")
    return Equivalence(True, s1.symmetric_difference(s2))


def _underlying_isomorphisms(g1: SignedGraph, g2: SignedGraph) -> Iterator[list[int]]:
    """All bijections p with uv in E(g1) iff p[u]p[v] in E(g2)."""
    n = g1.n
    adj1 = [set(a) for a in g1.adjacency]
    adj2 = [set(a) for a in g2.adjacency]
    deg1, deg2 = g1.degrees, g2.degrees
    # place high-degree, well-connected vertices first to prune early
    order = sorted(range(n), key=lambda v: (-deg1[v], v))
    placed: list[int] = []
    image = [-1] * n
    used = [False] * n

    def extend(depth: int):
        if depth == n:
            yield list(image)
            return
        v = order[depth]
        for w in range(n):
            if used[w] or deg2[w] != deg1[v]:
                continue
            ok = True
            for u in placed:
                if (u in adj1[v]) != (image[u] in adj2[w]):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used[w] = True
            placed.append(v)
            yield from extend(depth + 1)
            placed.pop()
            used[w] = False
            image[v] = -1

    yield from extend(0)


def switching_isomorphism(g1: SignedGraph, g2: SignedGraph) -> Optional[list[int]]:
    """A permutation p such that relabel(g1, p) is switching equivalent to g2."""
    if g1.n != g2.n or g1.e != g2.e:
        return None
    if g1.n > ISOMORPHISM_MAX_N:
        raise TooLarge(f"switching isomorphism is capped at n={ISOMORPHISM_MAX_N}")
    if sorted(g1.degrees) != sorted(g2.degrees):
        return None
    target = tree_normalize(g2)[0].signs
    for perm in _underlying_isomorphisms(g1, g2):
        h = relabel(g1, perm)
        if tree_normalize(h)[0].signs == target:
            return perm
    return None


def is_switching_isomorphic(g1: SignedGraph, g2: SignedGraph) -> bool:
    """True iff some relabelling of g1 is switching equivalent to g2 (n <= 10)."""
    return switching_isomorphism(g1, g2) is not None


def to_line(g: SignedGraph) -> str:
    """Serialise as ``n m u v s ...`` with ``s`` in ``{+, -}``."""
    parts = [str(g.n), str(g.e)]
    for (u, v), s in zip(g.edges, g.signs):
        parts += [str(u), str(v), "+" if s > 0 else "-"]
    return " ".join(parts)


def from_line(line: str) -> SignedGraph:
    tokens = line.split()
    if len(tokens) < 2:
        raise ParseError(f"expected 'n m ...', got {line!r}")
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise ParseError(f"bad header in {line!r}") from exc
    body = tokens[2:]
    if len(body) != 3 * m:
        raise ParseError(f"expected {m} edges, found {len(body) / 3:g}")
    triples = []
    for i in range(m):
        u, v, s = body[3 * i : 3 * i + 3]
        if s not in ("+", "-"):
            raise ParseError(f"bad sign token {s!r}")
        try:
            triples.append((int(u), int(v), 1 if s == "+" else -1))
        except ValueError as exc:
            raise ParseError(f"bad vertex token in {line!r}") from exc
    return make_signed_graph(n, triples)


def read_lines(lines: Iterable[str]) -> Iterator[SignedGraph]:
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            yield from_line(line)
