"""Clique colourings: verification, exact and brute-force χ_c, greedy upper bounds.

A clique colouring leaves no maximal clique with two or more vertices
monochromatic. Equivalently it is a weak colouring of the hypergraph whose
hyperedges are those maximal cliques.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal, Optional, Sequence

from .cliques import DEFAULT_CLIQUE_LIMIT, _bk_pivot, maximal_clique_masks
from .graph import Graph, VertexSet, _rng, iter_bits, lowest_bit

BRUTEFORCE_MAX_N = 12


class ColoringFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        for v, c in enumerate(self.colors):
            if not 0 <= c < self.k:
                raise ValueError(f"vertex {v} has color {c} outside 0..{self.k - 1}")

    @classmethod
    def from_colors(cls, colors: Sequence[int]) -> "Coloring":
        """Build a colouring whose ``k`` is one more than the largest colour used."""
        colors = tuple(colors)
        return cls(colors, max(colors, default=-1) + 1)

    @classmethod
    def from_classes(cls, n: int, classes: Sequence) -> "Coloring":
        colors = [-1] * n
        for c, members in enumerate(classes):
            for v in VertexSet(members):
                colors[v] = c
        if -1 in colors:
            raise ValueError("classes do not cover every vertex")
        return cls(tuple(colors), len(classes))

    @property
    def n(self) -> int:
        return len(self.colors)

    def class_masks(self) -> list[int]:
        masks = [0] * self.k
        for v, c in enumerate(self.colors):
            masks[c] |= 1 << v
        return masks

    def classes(self) -> list[VertexSet]:
        """Colour classes as a partition of V (classes may be empty)."""
        return [VertexSet(m) for m in self.class_masks()]

    def normalized(self) -> "Coloring":
        """Relabel colours in first-use order and drop unused ones."""
        relabel: dict[int, int] = {}
        out = [relabel.setdefault(c, len(relabel)) for c in self.colors]
        return Coloring(tuple(out), len(relabel))

    def dumps(self) -> str:
        return f"k={self.k}\n" + "".join(f"{c}\n" for c in self.colors)

    @classmethod
    def loads(cls, text: str) -> "Coloring":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("k="):
            raise ColoringFormatError("missing 'k=<count>' header")
        try:
            k = int(lines[0][2:])
            colors = tuple(int(ln) for ln in lines[1:])
        except ValueError as exc:
            raise ColoringFormatError(str(exc)) from None
        try:
            return cls(colors, k)
        except ValueError as exc:
            raise ColoringFormatError(str(exc)) from None


@dataclass(frozen=True)
class Verdict:
    valid: bool
    witness: Optional[VertexSet] = None

    def __bool__(self) -> bool:
        return self.valid


def monochromatic_cliques(g: Graph, c: Coloring, only_color: Optional[int] = None) -> Iterator[VertexSet]:
    """Maximal cliques (size >= 2) of ``g`` that lie inside a single colour class."""
    if c.n != g.n:
        raise ValueError(f"coloring covers {c.n} vertices, graph has {g.n}")
    for color, cls_mask in enumerate(c.class_masks()):
        if only_color is not None and color != only_color:
            continue
        if cls_mask.bit_count() < 2:
            continue
        for mask in maximal_clique_masks(g, 2, within=cls_mask):
            yield VertexSet(mask)


def verify_coloring(g: Graph, c: Coloring, only_color: Optional[int] = None) -> Verdict:
    """Valid iff no maximal clique with >= 2 vertices is monochromatic.

    Stops at the first monochromatic clique found, which becomes the witness.
    ``only_color`` restricts the search to one colour class.
    """
    witness = next(monochromatic_cliques(g, c, only_color), None)
    return Verdict(witness is None, witness)


# --- brute force oracle --------------------------------------------------------


def _bruteforce_hyperedges(g: Graph) -> list[int]:
    """Maximal cliques of size >= 2 by scanning every vertex subset."""
    out = []
    for mask in range(1, 1 << g.n):
        if mask.bit_count() < 2 or not g.is_clique(mask):
            continue
        if g.common_neighbors(mask) & ~mask == 0:
            out.append(mask)
    return out


def _restricted_growth(n: int, k: int) -> Iterator[list[int]]:
    """All colourings of n vertices with at most k colours, canonical first-use order."""
    colors = [0] * n

    def rec(i: int, used: int):
        if i == n:
            yield colors
            return
        for c in range(min(used + 1, k)):
            colors[i] = c
            yield from rec(i + 1, max(used, c + 1))

    if n == 0:
        yield colors
    else:
        yield from rec(1, 1)


def chi_c_bruteforce(g: Graph) -> tuple[int, Coloring]:
    """Exact χ_c by exhaustive search; independent of the enumeration and B&B code."""
    if g.n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force capped at n <= {BRUTEFORCE_MAX_N}, got {g.n}")
    edges = [list(iter_bits(e)) for e in _bruteforce_hyperedges(g)]
    for k in range(1, g.n + 1):
        for colors in _restricted_growth(g.n, k):
            if all(any(colors[v] != colors[e[0]] for v in e[1:]) for e in edges):
                return k, Coloring(tuple(colors), k)
    raise AssertionError("unreachable: n colours always suffice")


# --- exact branch and bound ----------------------------------------------------


class _Budget(Exception):
    pass


_MIXED = -2


class _HyperSearch:
    """Weak k-colouring search for a hypergraph given as vertex masks.

    Per hyperedge the search tracks how many vertices are still uncoloured and
    whether the coloured ones share a colour. When a hyperedge is down to one
    uncoloured vertex while the rest are monochromatic, that colour is
    forbidden for the last vertex. All changes go on a trail and are undone on
    backtrack.
    """

    def __init__(self, g: Graph, hyperedges: list[int], node_limit: int):
        self.n = g.n
        self.edges = list(hyperedges)
        self.incident: list[list[int]] = [[] for _ in range(g.n)]
        self.hyper_nbrs = [0] * g.n
        for i, e in enumerate(self.edges):
            for v in iter_bits(e):
                self.incident[v].append(i)
                self.hyper_nbrs[v] |= e
        for v in range(g.n):
            self.hyper_nbrs[v] &= ~(1 << v)
        self.degree = [g.degree(v) for v in range(g.n)]
        self.nodes = 0
        self.node_limit = node_limit

    def solve(self, k: int) -> Optional[list[int]]:
        """Return a weak k-colouring, ``None`` if none exists; raise ``_Budget`` on exhaustion."""
        self.k = k
        self.full = (1 << k) - 1
        self.color = [-1] * self.n
        self.cls = [0] * k
        self.unassigned = (1 << self.n) - 1
        self.left = [e.bit_count() for e in self.edges]
        self.mono = [-1] * len(self.edges)
        self.forb_cnt = [[0] * k for _ in range(self.n)]
        self.forb = [0] * self.n
        if self._rec(0):
            return list(self.color)
        return None

    def _assign(self, v: int, c: int, trail: list) -> None:
        bit = 1 << v
        self.color[v] = c
        self.cls[c] |= bit
        self.unassigned &= ~bit
        left, mono, edges = self.left, self.mono, self.edges
        for i in self.incident[v]:
            old = mono[i]
            new = c if old == -1 else (old if old == c else _MIXED)
            mono[i] = new
            left[i] -= 1
            trail.append((i, old))
            if left[i] == 1 and new >= 0:
                u = lowest_bit(edges[i] & self.unassigned)
                cnt = self.forb_cnt[u]
                cnt[new] += 1
                if cnt[new] == 1:
                    self.forb[u] |= 1 << new
                trail.append((-1 - u, new))

    def _undo(self, v: int, c: int, trail: list) -> None:
        while trail:
            a, b = trail.pop()
            if a < 0:
                u = -1 - a
                cnt = self.forb_cnt[u]
                cnt[b] -= 1
                if cnt[b] == 0:
                    self.forb[u] &= ~(1 << b)
            else:
                self.mono[a] = b
                self.left[a] += 1
        bit = 1 << v
        self.color[v] = -1
        self.cls[c] &= ~bit
        self.unassigned |= bit

    def _select(self):
        best_key, best = None, -1
        forb, full = self.forb, self.full
        for u in iter_bits(self.unassigned):
            f = forb[u]
            if f == full:
                return u, True
            hn = self.hyper_nbrs[u]
            sat = sum(1 for m in self.cls if m & hn)
            key = (f.bit_count(), sat, self.degree[u], -u)
            if best_key is None or key > best_key:
                best_key, best = key, u
        return best, False

    def _rec(self, used: int) -> bool:
        if not self.unassigned:
            return True
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise _Budget
        u, dead = self._select()
        if dead:
            return False
        forb = self.forb[u]
        for c in range(min(used + 1, self.k)):
            if forb >> c & 1:
                continue
            trail: list = []
            self._assign(u, c, trail)
            if self._rec(max(used, c + 1)):
                return True
            self._undo(u, c, trail)
        return False


def _first_fit(g: Graph, hyperedges: list[int], order: Sequence[int]) -> list[int]:
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for e in hyperedges:
        for v in iter_bits(e):
            incident[v].append(e & ~(1 << v))
    cls: list[int] = []
    colors = [0] * g.n
    for v in order:
        for c, m in enumerate(cls):
            if all(rest & ~m for rest in incident[v]):
                cls[c] |= 1 << v
                colors[v] = c
                break
        else:
            colors[v] = len(cls)
            cls.append(1 << v)
    return colors


@dataclass(frozen=True)
class ExactResult:
    k: int
    coloring: Coloring
    status: Literal["proved", "lower_upper_gap"]
    lower: int
    upper: int
    nodes: int = 0
    hyperedges: int = 0

    def __iter__(self):
        return iter((self.k, self.coloring, self.status))


def chi_c_exact(
    g: Graph,
    node_limit: int = 2_000_000,
    clique_limit: int = DEFAULT_CLIQUE_LIMIT,
) -> ExactResult:
    """Compute χ_c by iterative deepening over k with branch and bound.

    The hyperedges (maximal cliques of size >= 2) are materialised first; a
    :class:`~cliquechrom.cliques.CliqueLimitExceeded` propagates unchanged, so
    a truncated enumeration never yields a ``"proved"`` result. If the search
    runs out of nodes the best bracket is returned with status
    ``"lower_upper_gap"`` and ``k`` set to the upper end.
    """
    hyperedges = list(maximal_clique_masks(g, 2, clique_limit))
    if not hyperedges:
        return ExactResult(1, Coloring((0,) * g.n, 1), "proved", 1, 1)

    search = _HyperSearch(g, hyperedges, node_limit)
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    best = Coloring.from_colors(_first_fit(g, hyperedges, order)).normalized()
    lower = 2
    for k in range(lower, best.k):
        try:
            found = search.solve(k)
        except _Budget:
            return ExactResult(best.k, best, "lower_upper_gap", k, best.k, search.nodes, len(hyperedges))
        if found is not None:
            col = Coloring(tuple(found), k)
            return ExactResult(k, col, "proved", k, k, search.nodes, len(hyperedges))
        lower = k + 1
    return ExactResult(best.k, best, "proved", best.k, best.k, search.nodes, len(hyperedges))


def chromatic_number_via_engine(g: Graph, node_limit: int = 2_000_000) -> int:
    """Ordinary chromatic number: the same search with edges as hyperedges."""
    edges = [(1 << u) | (1 << v) for u, v in g.edges()]
    if not edges:
        return 1
    search = _HyperSearch(g, edges, node_limit)
    k = 2
    while search.solve(k) is None:
        k += 1
    return k


# --- greedy upper bound ----------------------------------------------------------


def _closes_clique(adj, v: int, cls: int) -> bool:
    """True iff some maximal clique of size >= 2 through ``v`` lies in ``cls ∪ {v}``."""
    nv = adj[v]
    if not nv:
        return False
    return next(_bk_pivot(adj, [v], nv & cls, nv & ~cls), None) is not None


def _greedy_once(g: Graph, order) -> list[int]:
    adj = g.adj
    cls: list[int] = []
    colors = [0] * g.n
    for v in order:
        v = int(v)
        for c, m in enumerate(cls):
            if not _closes_clique(adj, v, m):
                cls[c] |= 1 << v
                colors[v] = c
                break
        else:
            colors[v] = len(cls)
            cls.append(1 << v)
    return colors


def greedy_clique_coloring(
    g: Graph, rng, restarts: int = 1, repair_limit: int = 10_000
) -> Coloring:
    """Upper-bound heuristic: first-fit over random vertex orders.

    A vertex joins the first class in which it does not complete a maximal
    clique. "Contains no maximal clique" is closed under taking subsets, so
    first-fit already yields a valid colouring; the final verify-and-repair
    loop (split a vertex of any monochromatic clique into a fresh class) is a
    safety net. The best of ``restarts`` orders is returned.
    """
    gen = _rng(rng)
    best: Optional[list[int]] = None
    for _ in range(max(1, restarts)):
        colors = _greedy_once(g, gen.permutation(g.n))
        if best is None or max(colors) < max(best):
            best = colors
    col = Coloring.from_colors(best).normalized() if g.n else Coloring((), 1)
    for _ in range(repair_limit):
        verdict = verify_coloring(g, col)
        if verdict.valid:
            return col
        colors = list(col.colors)
        colors[max(verdict.witness)] = col.k
        col = Coloring(tuple(colors), col.k + 1)
    raise RuntimeError(f"clique coloring repair did not converge after {repair_limit} rounds")
