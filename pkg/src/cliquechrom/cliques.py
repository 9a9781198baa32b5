"""Maximal clique enumeration, maximality tests and clique search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal, Optional

import numpy as np

from .graph import Graph, VertexLike, VertexSet, _rng, as_mask, iter_bits, lowest_bit

DEFAULT_CLIQUE_LIMIT = 10**7


class CliqueLimitExceeded(RuntimeError):
    """Raised when an enumeration would emit more cliques than its limit."""

    def __init__(self, limit: int):
        super().__init__(f"maximal clique enumeration truncated after {limit} cliques")
        self.limit = limit


def degeneracy_order(g: Graph, within: int) -> list[int]:
    """Smallest-last ordering of the subgraph induced on ``within``."""
    alive = within
    deg = {v: (g.adj[v] & within).bit_count() for v in iter_bits(within)}
    order = []
    while alive:
        v = min(iter_bits(alive), key=lambda u: (deg[u], u))
        order.append(v)
        alive &= ~(1 << v)
        for u in iter_bits(g.adj[v] & alive):
            deg[u] -= 1
    return order


def _bk_pivot(adj, r: list[int], p: int, x: int) -> Iterator[list[int]]:
    if not p:
        if not x:
            yield r
        return
    # pivot maximises |P ∩ N(u)| over P ∪ X
    best, pivot = -1, 0
    for u in iter_bits(p | x):
        c = (p & adj[u]).bit_count()
        if c > best:
            best, pivot = c, u
    for v in iter_bits(p & ~adj[pivot]):
        nv = adj[v]
        yield from _bk_pivot(adj, r + [v], p & nv, x & nv)
        bit = 1 << v
        p &= ~bit
        x |= bit


def maximal_clique_masks(
    g: Graph,
    min_size: int = 1,
    limit: int = DEFAULT_CLIQUE_LIMIT,
    within: Optional[VertexLike] = None,
) -> Iterator[int]:
    """Yield bitmasks of maximal cliques of ``g`` (see :func:`maximal_cliques`)."""
    inside = g.all if within is None else as_mask(within) & g.all
    outside = g.all & ~inside
    adj = g.adj
    emitted = 0
    earlier = 0
    for v in degeneracy_order(g, inside):
        nv = adj[v]
        p = nv & inside & ~earlier
        x = nv & (earlier | outside)
        for clique in _bk_pivot(adj, [v], p, x):
            if len(clique) < min_size:
                continue
            emitted += 1
            if emitted > limit:
                raise CliqueLimitExceeded(limit)
            mask = 0
            for u in clique:
                mask |= 1 << u
            yield mask
        earlier |= 1 << v


def maximal_cliques(
    g: Graph,
    min_size: int = 1,
    limit: int = DEFAULT_CLIQUE_LIMIT,
    within: Optional[VertexLike] = None,
) -> Iterator[VertexSet]:
    """Lazily enumerate the maximal cliques of ``g`` with at least ``min_size`` vertices.

    Bron-Kerbosch with Tomita pivoting under a degeneracy-ordered outer loop.
    With ``within`` given, only cliques of ``g`` lying inside that set are
    produced (they are still maximal in all of ``g``).

    Raises :class:`CliqueLimitExceeded` instead of silently stopping once more
    than ``limit`` cliques would be emitted.
    """
    for mask in maximal_clique_masks(g, min_size, limit, within):
        yield VertexSet(mask)


@dataclass(frozen=True)
class MaximalityCheck:
    status: Literal["yes", "not_a_clique", "not_maximal"]
    witness: Optional[object] = None  # (u, v) pair or extending vertex

    def __bool__(self) -> bool:
        return self.status == "yes"


def is_maximal_clique(g: Graph, k: VertexLike) -> MaximalityCheck:
    km = as_mask(k)
    if not km:
        raise ValueError("empty vertex set")
    for v in iter_bits(km):
        missing = km & ~g.adj[v] & ~(1 << v)
        if missing:
            u = lowest_bit(missing)
            return MaximalityCheck("not_a_clique", (min(u, v), max(u, v)))
    ext = g.common_neighbors(km) & ~km
    if ext:
        return MaximalityCheck("not_maximal", lowest_bit(ext))
    return MaximalityCheck("yes")


def extend_to_maximal(g: Graph, k: VertexLike, rng) -> VertexSet:
    """Greedily grow the clique ``k`` to a maximal one.

    Candidates are tried in a random vertex order drawn from ``rng``.
    """
    km = as_mask(k)
    if not g.is_clique(km):
        raise ValueError("input is not a clique")
    cand = g.common_neighbors(km) & ~km
    if not cand:
        return VertexSet(km)
    for v in _rng(rng).permutation(g.n):
        v = int(v)
        if cand >> v & 1:
            km |= 1 << v
            cand &= g.adj[v]
            if not cand:
                break
    return VertexSet(km)


def _greedy_clique(adj, cand: int, gen: np.random.Generator) -> int:
    """Repeatedly add the candidate with most candidate-neighbours (random ties)."""
    clique = 0
    while cand:
        members = list(iter_bits(cand))
        scores = np.array([(cand & adj[v]).bit_count() for v in members])
        best = np.flatnonzero(scores == scores.max())
        v = members[int(best[gen.integers(best.size)])]
        clique |= 1 << v
        cand &= adj[v]
    return clique


def find_clique_in(
    g: Graph,
    y: VertexLike,
    target_size: int,
    rng,
    effort: int = 20_000,
) -> Optional[VertexSet]:
    """Search for a clique of at least ``target_size`` vertices inside ``y``.

    Randomised greedy restarts followed by a branch-and-bound descent capped at
    ``effort`` search nodes. ``None`` only means the budget ran out; it is not
    a proof that no such clique exists.
    """
    gen = _rng(rng)
    adj = g.adj
    ym = as_mask(y) & g.all
    if target_size <= 0:
        return VertexSet(0)
    if ym.bit_count() < target_size:
        return None

    for _ in range(8):
        c = _greedy_clique(adj, ym, gen)
        if c.bit_count() >= target_size:
            return VertexSet(c)

    budget = [effort]

    def dfs(r: int, size: int, p: int) -> Optional[int]:
        if size >= target_size:
            return r
        if size + p.bit_count() < target_size:
            return None
        members = list(iter_bits(p))
        gen.shuffle(members)
        members.sort(key=lambda v: -(p & adj[v]).bit_count())
        for v in members:
            if budget[0] <= 0:
                return None
            budget[0] -= 1
            found = dfs(r | 1 << v, size + 1, p & adj[v])
            if found is not None:
                return found
            p &= ~(1 << v)
            if size + p.bit_count() < target_size:
                return None
        return None

    found = dfs(0, 0, ym)
    return None if found is None else VertexSet(found)
