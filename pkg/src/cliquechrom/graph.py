"""Dense undirected graphs over Python-int bitsets.

Row ``adj[v]`` is an integer whose bit ``u`` is set iff ``{u, v}`` is an edge.
Vertex sets are likewise integer masks, wrapped in :class:`VertexSet` at API
boundaries.
"""

from __future__ import annotations

import io
import logging
from collections.abc import Iterable, Iterator, Set
from typing import Union

import numpy as np

log = logging.getLogger(__name__)

#: Identifier written into experiment metadata; see :func:`make_rng`.
GENERATOR_ID = "numpy.PCG64/lex-pairs-v1"


class GraphFormatError(ValueError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class VertexSet(Set):
    """Immutable set of vertex indices backed by an integer bitmask."""

    __slots__ = ("mask", "_size")

    def __init__(self, members: Union[int, Iterable[int]] = 0):
        if isinstance(members, VertexSet):
            mask = members.mask
        elif isinstance(members, (int, np.integer)) and not isinstance(members, bool):
            mask = int(members)
            if mask < 0:
                raise ValueError("negative mask")
        else:
            mask = 0
            for v in members:
                if v < 0:
                    raise ValueError(f"negative vertex {v}")
                mask |= 1 << int(v)
        self.mask = mask
        self._size = mask.bit_count()

    @classmethod
    def of(cls, *vertices: int) -> "VertexSet":
        return cls(vertices)

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, (int, np.integer)) and v >= 0 and bool(self.mask >> int(v) & 1)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, VertexSet):
            return self.mask == other.mask
        return Set.__eq__(self, other)

    def __hash__(self) -> int:
        return hash(self.mask)

    def __or__(self, other):
        return VertexSet(self.mask | as_mask(other))

    def __and__(self, other):
        return VertexSet(self.mask & as_mask(other))

    def __sub__(self, other):
        return VertexSet(self.mask & ~as_mask(other))

    def __xor__(self, other):
        return VertexSet(self.mask ^ as_mask(other))

    def __lt__(self, other):
        m = as_mask(other)
        return self.mask != m and self.mask & ~m == 0

    def __le__(self, other):
        return self.mask & ~as_mask(other) == 0

    def min(self) -> int:
        if not self.mask:
            raise ValueError("empty vertex set")
        return lowest_bit(self.mask)

    def sorted(self) -> list[int]:
        return list(iter_bits(self.mask))

    def __repr__(self) -> str:
        return f"VertexSet({self.sorted()})"


VertexLike = Union[VertexSet, int, Iterable[int]]


def as_mask(s: VertexLike) -> int:
    """Coerce a vertex set, raw mask, or iterable of vertices to a mask."""
    if isinstance(s, VertexSet):
        return s.mask
    if isinstance(s, (int, np.integer)) and not isinstance(s, bool):
        return int(s)
    return VertexSet(s).mask


class Graph:
    """Undirected simple graph on vertices ``0..n-1``; immutable once built."""

    __slots__ = ("n", "adj", "all")

    def __init__(self, n: int, adj: Iterable[int]):
        self.n = n
        self.adj = tuple(adj)
        self.all = (1 << n) - 1
        if len(self.adj) != n:
            raise ValueError(f"expected {n} rows, got {len(self.adj)}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete_multipartite(cls, *sizes: int) -> "Graph":
        n = sum(sizes)
        part = []
        for i, size in enumerate(sizes):
            part += [i] * size
        return cls.from_edges(
            n, [(u, v) for u in range(n) for v in range(u + 1, n) if part[u] != part[v]]
        )

    @classmethod
    def from_matrix(cls, mat) -> "Graph":
        mat = np.asarray(mat, dtype=bool)
        n = mat.shape[0]
        if mat.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        if n == 0:
            return cls(0, [])
        packed = np.packbits(mat, axis=1, bitorder="little")
        return cls(n, [int.from_bytes(row.tobytes(), "little") for row in packed])

    def to_matrix(self) -> np.ndarray:
        mat = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges():
            mat[u, v] = mat[v, u] = True
        return mat

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in iter_bits(self.adj[u] >> (u + 1)):
                yield u, u + 1 + v

    def n_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def vertices(self) -> VertexSet:
        return VertexSet(self.all)

    def common_neighbors(self, s: VertexLike) -> int:
        """Mask of vertices adjacent to every member of ``s`` (all of V for empty s)."""
        cand = self.all
        for v in iter_bits(as_mask(s)):
            cand &= self.adj[v]
        return cand

    def is_clique(self, s: VertexLike) -> bool:
        m = as_mask(s)
        for v in iter_bits(m):
            if m & ~self.adj[v] & ~(1 << v):
                return False
        return True

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` unless symmetric, loop-free, and in range."""
        for v, row in enumerate(self.adj):
            assert not row >> v & 1, f"self-loop at {v}"
            assert row & ~self.all == 0, f"row {v} has bits beyond n"
            for u in iter_bits(row):
                assert self.adj[u] >> v & 1, f"asymmetric pair ({v}, {u})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.n_edges()})"


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator: PCG64, identical streams on every platform."""
    return np.random.Generator(np.random.PCG64(seed))


def _rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(int(rng))


def gen_gnp(n: int, p: float, rng) -> Graph:
    """Sample G(n, p).

    One uniform draw per unordered pair, pairs taken in lexicographic order
    ``(0,1), (0,2), ..., (n-2,n-1)``; the pair is an edge iff the draw is ``< p``.
    ``rng`` is a ``numpy.random.Generator`` or an integer seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    gen = _rng(rng)
    iu, ju = np.triu_indices(n, 1)
    hit = gen.random(iu.size) < p
    mat = np.zeros((n, n), dtype=bool)
    mat[iu[hit], ju[hit]] = True
    mat |= mat.T
    return Graph.from_matrix(mat)


def non_neighbor_count(g: Graph, v: int, y: VertexLike) -> int:
    ym = as_mask(y)
    if ym >> v & 1:
        raise ValueError(f"vertex {v} lies inside the set")
    return (ym & ~g.adj[v]).bit_count()


def nonadjacent_to_all(g: Graph, s: VertexLike) -> VertexSet:
    """Vertices outside ``s`` with no neighbour in ``s``."""
    sm = as_mask(s)
    touched = sm
    for v in iter_bits(sm):
        touched |= g.adj[v]
    return VertexSet(g.all & ~touched)


def induced_subgraph(g: Graph, s: VertexLike) -> tuple[Graph, list[int]]:
    """Return ``(h, old)`` where vertex ``i`` of ``h`` is vertex ``old[i]`` of ``g``."""
    old = list(iter_bits(as_mask(s)))
    if not old:
        raise ValueError("induced subgraph of an empty set")
    pos = {v: i for i, v in enumerate(old)}
    rows = []
    for v in old:
        row = 0
        for u in iter_bits(g.adj[v] & as_mask(s)):
            row |= 1 << pos[u]
        rows.append(row)
    return Graph(len(old), rows), old


# --- text formats -----------------------------------------------------------


def _collect(n: int, pairs, lineno_pairs) -> Graph:
    rows = [0] * n
    loops = dups = 0
    for (u, v), lineno in zip(pairs, lineno_pairs):
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: vertex out of range for n={n}")
        if u == v:
            loops += 1
            continue
        if rows[u] >> v & 1:
            dups += 1
            continue
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    if loops or dups:
        log.warning("ignored %d self-loop(s) and %d duplicate edge(s)", loops, dups)
    return Graph(n, rows)


def _ints(parts: list[str], lineno: int) -> list[int]:
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise GraphFormatError(f"line {lineno}: expected integers, got {' '.join(parts)!r}") from None


def _read_edgelist(text: str) -> Graph:
    n = None
    pairs, linenos = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise GraphFormatError(f"line {lineno}: header must be a single vertex count")
            (n,) = _ints(parts, lineno)
            if n < 1:
                raise GraphFormatError(f"line {lineno}: vertex count must be positive")
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v'")
        pairs.append(tuple(_ints(parts, lineno)))
        linenos.append(lineno)
    if n is None:
        raise GraphFormatError("missing vertex-count header")
    return _collect(n, pairs, linenos)


def _read_dimacs(text: str) -> Graph:
    n = None
    pairs, linenos = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if n is not None or len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise GraphFormatError(f"line {lineno}: bad problem line {raw!r}")
            n, _ = _ints(parts[2:], lineno)
            if n < 1:
                raise GraphFormatError(f"line {lineno}: vertex count must be positive")
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'e u v'")
            u, v = _ints(parts[1:], lineno)
            pairs.append((u - 1, v - 1))
            linenos.append(lineno)
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphFormatError("missing 'p edge n m' line")
    return _collect(n, pairs, linenos)


def read_graph(source, fmt: str = "edgelist") -> Graph:
    """Parse a graph from bytes, text, or a binary/text stream.

    ``fmt`` is ``"edgelist"`` (header ``n``, 0-based ``u v`` lines, ``#``
    comments) or ``"dimacs"`` (``p edge n m`` and 1-based ``e u v`` lines).
    """
    if hasattr(source, "read"):
        source = source.read()
    text = source.decode("utf-8") if isinstance(source, (bytes, bytearray)) else source
    if fmt == "edgelist":
        return _read_edgelist(text)
    if fmt == "dimacs":
        return _read_dimacs(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def write_graph(g: Graph, fmt: str = "edgelist") -> bytes:
    out = io.StringIO()
    if fmt == "edgelist":
        out.write(f"{g.n}\n")
        for u, v in g.edges():
            out.write(f"{u} {v}\n")
    elif fmt == "dimacs":
        out.write(f"p edge {g.n} {g.n_edges()}\n")
        for u, v in g.edges():
            out.write(f"e {u + 1} {v + 1}\n")
    else:
        raise ValueError(f"unknown graph format {fmt!r}")
    return out.getvalue().encode("utf-8")


def guess_format(path: str) -> str:
    return "dimacs" if path.endswith((".col", ".dimacs", ".clq")) else "edgelist"


def load_graph(path: str, fmt: str | None = None) -> Graph:
    with open(path, "rb") as fh:
        return read_graph(fh, fmt or guess_format(path))


def save_graph(g: Graph, path: str, fmt: str | None = None) -> None:
    with open(path, "wb") as fh:
        fh.write(write_graph(g, fmt or guess_format(path)))
