"""Finite simple graphs on vertices 0..n-1, with graph6 and edge-list I/O.

Adjacency is stored as one integer bitmask per vertex, so ``has_edge`` is a
shift and a mask.  Graphs are immutable once built.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

GRAPH6_HEADER = ">>graph6<<"
MAX_GRAPH6_ORDER = 62

#: Distance reported by :func:`bfs_distance` for vertices no source reaches.
UNREACHABLE = None

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Base class for unparsable graph input."""


class Graph6LengthError(GraphFormatError):
    """The body does not have the length the order byte demands."""


class Graph6CharacterError(GraphFormatError):
    """A byte lies outside the printable range 63..126."""


class Graph6TrailingDataError(GraphFormatError):
    """Padding bits are set, or extra characters follow the graph."""


class EdgeListError(GraphFormatError):
    """Malformed plain edge-list input."""


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {v} references vertices outside 0..{self.n - 1}")
            if row >> v & 1:
                raise ValueError(f"self-loop at {v}")
        for u, row in enumerate(self.rows):
            r = row
            while r:
                low = r & -r
                w = low.bit_length() - 1
                if not self.rows[w] >> u & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {w}")
                r ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbours(self, v: int) -> list[int]:
        return bits(self.rows[v])

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        """Edges as ``(u, v)`` with ``u < v``, sorted."""
        return tuple((u, v) for u in range(self.n) for v in bits(self.rows[u] >> (u + 1) << (u + 1)))

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @property
    def m(self) -> int:
        return len(self.edges)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """The graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def __str__(self):
        return f"Graph(n={self.n}, edges={list(self.edges)})"


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    if not s:
        raise Graph6LengthError("empty graph6 string")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise Graph6CharacterError(f"character {ch!r} outside graph6 range 63..126")
    n = ord(s[0]) - 63
    if n == 63:
        raise Graph6LengthError("long-form graph6 (n > 62) is not supported")
    nbits = n * (n - 1) // 2
    nchars = -(-nbits // 6)
    body = s[1:]
    if len(body) < nchars:
        raise Graph6LengthError(f"graph6 body has {len(body)} chars, need {nchars} for n={n}")
    if len(body) > nchars:
        raise Graph6TrailingDataError(f"{len(body) - nchars} unexpected trailing chars")
    value = 0
    for ch in body:
        value = value << 6 | (ord(ch) - 63)
    pad = nchars * 6 - nbits
    if value & ((1 << pad) - 1):
        raise Graph6TrailingDataError("non-zero padding bits")
    value >>= pad
    rows = [0] * n
    k = nbits - 1
    for v in range(1, n):
        for u in range(v):
            if value >> k & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            k -= 1
    return Graph(n, tuple(rows))


def to_graph6(g: Graph) -> str:
    if g.n > MAX_GRAPH6_ORDER:
        raise ValueError(f"short-form graph6 supports n <= {MAX_GRAPH6_ORDER}, got {g.n}")
    out = [chr(g.n + 63)]
    acc = nacc = 0
    for v in range(1, g.n):
        for u in range(v):
            acc = acc << 1 | (g.rows[u] >> v & 1)
            nacc += 1
            if nacc == 6:
                out.append(chr(acc + 63))
                acc = nacc = 0
    if nacc:
        out.append(chr((acc << (6 - nacc)) + 63))
    return "".join(out)


def parse_edge_list(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise EdgeListError("missing vertex count")
    try:
        n = int(lines[0][0])
    except ValueError:
        raise EdgeListError(f"unparsable vertex count {lines[0][0]!r}") from None
    if len(lines[0]) != 1 or n < 0:
        raise EdgeListError("first line must be a single non-negative vertex count")
    pairs = []
    for lineno, toks in enumerate(lines[1:], start=2):
        if len(toks) != 2:
            raise EdgeListError(f"line {lineno}: expected 'u v', got {' '.join(toks)!r}")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: unparsable token in {' '.join(toks)!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListError(f"line {lineno}: vertex index out of range for n={n}")
        if u == v:
            raise EdgeListError(f"line {lineno}: self-loop at {u}")
        pairs.append((u, v))
    return Graph.from_edges(n, pairs)


def to_edge_list(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.edges]) + "\n"


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Connected components, ordered by least vertex."""
    seen = 0
    comps = []
    for s in range(g.n):
        if seen >> s & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.rows[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(frozenset(bits(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced by ``s``; the list maps new ids back to original ids."""
    members = sorted(set(s))
    for v in members:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    pos = {v: i for i, v in enumerate(members)}
    rows = []
    for v in members:
        row = 0
        for w in bits(g.rows[v]):
            if w in pos:
                row |= 1 << pos[w]
        rows.append(row)
    return Graph(len(members), tuple(rows)), members


def bfs_distance(g: Graph, sources: Iterable[int]) -> list[int | None]:
    """Multi-source BFS; unreachable vertices get ``UNREACHABLE``."""
    dist: list[int | None] = [UNREACHABLE] * g.n
    queue = deque()
    for s in sources:
        if dist[s] is None:
            dist[s] = 0
            queue.append(s)
    while queue:
        v = queue.popleft()
        for w in bits(g.rows[v]):
            if dist[w] is None:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def degree_profile(g: Graph) -> tuple[list[int], bool]:
    degrees = sorted(g.degree(v) for v in range(g.n))
    return degrees, len(set(degrees)) <= 1


def is_regular(g: Graph) -> bool:
    return degree_profile(g)[1]


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((v, (v + 1) % n) for v in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((v, v + 1) for v in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph.from_edges(leaves + 1, ((0, v) for v in range(1, leaves + 1)))
