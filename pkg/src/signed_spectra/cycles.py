"""Balance, cycle signs, negative cycles and the frustration index."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CapExceeded, NotACycle, TooLargeForExact
from .graph import SignedGraph, SwitchSet, switch, tree_potential

PATH_CAP = 10**8
FRUSTRATION_MAX_N = 24
_CHUNK_BITS = 16


@dataclass(frozen=True)
class CycleWitness:
    """A cycle ``v0 v1 ... v(l-1) v0`` together with its sign."""

    vertices: tuple[int, ...]
    sign: int

    @property
    def length(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def is_valid_in(self, g: SignedGraph) -> bool:
        try:
            return cycle_sign(g, self.vertices) == self.sign
        except NotACycle:
            return False


@dataclass(frozen=True)
class CycleSearch:
    """Result of a fixed-length query; truthy when a cycle was found."""

    found: bool
    witness: Optional[CycleWitness] = None

    def __bool__(self) -> bool:
        return self.found


@dataclass(frozen=True)
class FrustrationResult:
    epsilon: int
    witness: SwitchSet


def _canonical_cycle(vertices: Sequence[int]) -> tuple[int, ...]:
    vs = list(vertices)
    i = vs.index(min(vs))
    vs = vs[i:] + vs[:i]
    if len(vs) > 2 and vs[-1] < vs[1]:
        vs = [vs[0]] + vs[:0:-1]
    return tuple(vs)


def is_balanced(g: SignedGraph) -> bool:
    """True iff every cycle is positive.

    Signs are propagated along a spanning forest; a co-tree edge whose sign
    disagrees with the propagated potentials closes a negative cycle.
    """
    pot = tree_potential(g)
    return all(
        (s < 0) == bool(pot[u] ^ pot[v]) for (u, v), s in zip(g.edges, g.signs)
    )


def cycle_sign(g: SignedGraph, vertices: Sequence[int]) -> int:
    vs = list(vertices)
    if len(vs) < 3 or len(set(vs)) != len(vs):
        raise NotACycle(f"{vs} is not a sequence of at least 3 distinct vertices")
    sign = 1
    for i, u in enumerate(vs):
        w = vs[(i + 1) % len(vs)]
        if not (0 <= u < g.n and 0 <= w < g.n):
            raise NotACycle(f"vertex out of range in {vs}")
        s = g.sign(u, w)
        if s == 0:
            raise NotACycle(f"{u} and {w} are not adjacent")
        sign *= s
    return sign


def double_cover(g: SignedGraph) -> SignedGraph:
    """The all-positive 2-lift: vertex ``v`` lifts to ``v`` and ``v + n``.

    A positive edge joins copies in the same layer, a negative edge crosses
    layers. A negative closed walk through ``v`` lifts to a walk from ``v``
    to ``v + n``.
    """
    n = g.n
    edges = []
    for (u, v), s in zip(g.edges, g.signs):
        if s > 0:
            edges += [(u, v), (u + n, v + n)]
        else:
            edges += [(u, v + n), (v, u + n)]
    edges.sort()
    return SignedGraph(2 * n, tuple(edges), (1,) * len(edges))


def _lift_distance(cover: SignedGraph, n: int, v: int) -> Optional[list[int]]:
    """BFS path in the cover from ``v`` to ``v + n``, projected to g."""
    target = v + n
    parent = {v: -1}
    queue = deque([v])
    while queue:
        a = queue.popleft()
        if a == target:
            break
        for b in cover.adjacency[a]:
            if b not in parent:
                parent[b] = a
                queue.append(b)
    if target not in parent:
        return None
    walk = []
    a = target
    while a != -1:
        walk.append(a % n)
        a = parent[a]
    walk.reverse()
    return walk[:-1]


def shortest_negative_cycle(g: SignedGraph) -> Optional[CycleWitness]:
    """A shortest negative cycle, or None when g is balanced.

    The minimum over v of the lifted distance is attained by a closed walk
    that cannot repeat a vertex (splitting it would give a shorter negative
    walk), so the projection is a cycle.
    """
    cover = double_cover(g)
    best: Optional[tuple[int, ...]] = None
    for v in range(g.n):
        walk = _lift_distance(cover, g.n, v)
        if walk is None:
            continue
        cyc = _canonical_cycle(walk)
        if best is None or (len(cyc), cyc) < (len(best), best):
            best = cyc
    if best is None:
        return None
    return CycleWitness(best, cycle_sign(g, best))


def negative_girth(g: SignedGraph) -> Optional[int]:
    w = shortest_negative_cycle(g)
    return None if w is None else w.length


class _Budget:
    __slots__ = ("left",)

    def __init__(self, cap: int):
        self.left = cap

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise CapExceeded("path enumeration budget exhausted")


def _signed_path(
    pos: Sequence[int],
    neg: Sequence[int],
    start: int,
    end: int,
    steps: int,
    want: int,
    allowed: int,
    budget: _Budget,
) -> Optional[list[int]]:
    """Simple path start -> end with ``steps`` edges and sign product ``want``.

    Interior vertices come from the bitmask ``allowed`` (which must exclude
    ``start`` and ``end``). The last two steps are resolved with mask
    intersections instead of branching.
    """
    path = [start]

    def rec(x: int, sign: int, free: int, left: int) -> bool:
        if left == 1:
            if sign > 0:
                hit = (pos[x] >> end) & 1 if want > 0 else (neg[x] >> end) & 1
            else:
                hit = (neg[x] >> end) & 1 if want > 0 else (pos[x] >> end) & 1
            if hit:
                path.append(end)
                return True
            return False
        if left == 2:
            same = (pos[x] & pos[end]) | (neg[x] & neg[end])
            diff = (pos[x] & neg[end]) | (neg[x] & pos[end])
            cand = (same if sign == want else diff) & free
            if cand:
                y = (cand & -cand).bit_length() - 1
                path.extend((y, end))
                return True
            return False
        for mask, s in ((pos[x] & free, 1), (neg[x] & free, -1)):
            while mask:
                low = mask & -mask
                y = low.bit_length() - 1
                mask ^= low
                budget.spend()
                path.append(y)
                if rec(y, sign * s, free & ~low, left - 1):
                    return True
                path.pop()
        return False

    if steps < 1:
        return None
    if rec(start, 1, allowed, steps):
        return path
    return None


def has_negative_cycle_of_length(
    g: SignedGraph, r: int, cap: int = PATH_CAP
) -> CycleSearch:
    """Find a negative cycle with exactly ``r`` edges.

    Cycles are rooted at their smallest vertex, so the search from ``s`` only
    walks through vertices larger than ``s``.
    """
    if r < 3 or r > g.n:
        return CycleSearch(False)
    pos, neg = g.neighbor_masks
    full = (1 << g.n) - 1
    budget = _Budget(cap)
    for s in range(g.n - r + 1):
        higher = full & ~((1 << (s + 1)) - 1)
        path = _signed_path(pos, neg, s, s, r, -1, higher, budget)
        if path is not None:
            cyc = path[:-1]
            return CycleSearch(True, CycleWitness(tuple(cyc), cycle_sign(g, cyc)))
    return CycleSearch(False)


def has_signed_path(
    g: SignedGraph,
    u: int,
    v: int,
    steps: int,
    sign: int,
    cap: int = PATH_CAP,
) -> Optional[list[int]]:
    """A simple ``u``-``v`` path with ``steps`` edges and the given sign.

    With ``steps >= 2`` the edge ``uv`` itself is never used, so the answer
    is the same whether or not ``uv`` is present in g.
    """
    pos, neg = g.neighbor_masks
    allowed = ((1 << g.n) - 1) & ~(1 << u) & ~(1 << v)
    return _signed_path(pos, neg, u, v, steps, sign, allowed, _Budget(cap))


def negative_cycle_lengths(g: SignedGraph, lengths, cap: int = PATH_CAP) -> dict[int, bool]:
    """Map each r to whether g is free of negative r-cycles."""
    return {r: not has_negative_cycle_of_length(g, r, cap) for r in lengths}


def frustration_index(g: SignedGraph) -> FrustrationResult:
    """Minimum number of negative edges over the switching class of g.

    Every switch set with vertex 0 outside is scored at once with bitwise
    parity arithmetic over chunks of 2^16 sets.
    """
    n = g.n
    if n > FRUSTRATION_MAX_N:
        raise TooLargeForExact(f"exact frustration is capped at n={FRUSTRATION_MAX_N}")
    if g.e == 0:
        return FrustrationResult(0, SwitchSet())
    total = 1 << (n - 1)
    chunk = min(total, 1 << _CHUNK_BITS)
    us = np.array([u for u, _ in g.edges])
    vs = np.array([v for _, v in g.edges])
    negs = np.array([s < 0 for s in g.signs], dtype=np.uint8)
    best_count, best_mask = None, 0
    for lo in range(0, total, chunk):
        x = np.arange(lo, lo + chunk, dtype=np.int64)
        # bit v of a switch set lives at position v - 1; vertex 0 is outside
        bits = np.zeros((n, chunk), dtype=np.uint8)
        for v in range(1, n):
            bits[v] = (x >> (v - 1)) & 1
        counts = np.zeros(chunk, dtype=np.int32)
        for u, v, ng in zip(us, vs, negs):
            counts += bits[u] ^ bits[v] ^ ng
        i = int(np.argmin(counts))
        if best_count is None or counts[i] < best_count:
            best_count, best_mask = int(counts[i]), (lo + i) << 1
    return FrustrationResult(best_count, SwitchSet.from_mask(best_mask))


def count_negative(g: SignedGraph) -> int:
    return sum(1 for s in g.signs if s < 0)


def apply_frustration_witness(g: SignedGraph, res: FrustrationResult) -> SignedGraph:
    return switch(g, res.witness)
