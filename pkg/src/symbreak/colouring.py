"""Edge colourings and the preserve/break predicates built on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .graph import Edge, Graph, edge
from .symmetry import AutGroup, Permutation, edge_permutations, identity

# Colour roles used by the construction.
PINK = 1
BLUE = 2

DISTINGUISHING = "distinguishing"
ALMOST_DISTINGUISHING = "almost distinguishing"
NOT_ALMOST_DISTINGUISHING = "not almost distinguishing"

MAX_ISOMORPHISM_ORDER = 12


@dataclass(frozen=True)
class EdgeColouring:
    """Colours ``1..k`` indexed like ``edges`` (which are sorted, ``u < v``)."""

    edges: tuple[Edge, ...]
    colours: tuple[int, ...]
    k: int

    def __post_init__(self):
        if len(self.edges) != len(self.colours):
            raise ValueError("one colour per edge required")
        bad = [c for c in self.colours if not 1 <= c <= self.k]
        if bad:
            raise ValueError(f"colours {sorted(set(bad))} outside 1..{self.k}")

    @classmethod
    def for_graph(cls, g: Graph, colours: Sequence[int], k: int | None = None) -> "EdgeColouring":
        colours = tuple(int(c) for c in colours)
        if k is None:
            k = max(colours, default=1)
        return cls(g.edges, colours, k)

    @classmethod
    def from_mapping(cls, g: Graph, colour_of: Mapping[Edge, int], k: int | None = None) -> "EdgeColouring":
        missing = [e for e in g.edges if e not in colour_of]
        if missing:
            raise ValueError(f"uncoloured edges: {missing}")
        return cls.for_graph(g, [colour_of[e] for e in g.edges], k)

    @classmethod
    def monochromatic(cls, g: Graph, colour: int = 1, k: int = 1) -> "EdgeColouring":
        return cls(g.edges, (colour,) * g.m, max(k, colour))

    @cached_property
    def _lookup(self) -> dict[Edge, int]:
        return dict(zip(self.edges, self.colours))

    def colour_of(self, u: int, v: int) -> int:
        return self._lookup[edge(u, v)]

    def as_dict(self) -> dict[Edge, int]:
        return dict(self._lookup)

    def renamed(self, mapping: Mapping[int, int]) -> "EdgeColouring":
        """Apply a renaming of colour ids (unmapped colours are kept)."""
        new = tuple(mapping.get(c, c) for c in self.colours)
        return EdgeColouring(self.edges, new, max(self.k, max(new, default=1)))

    def relabelled(self, perm: Sequence[int]) -> "EdgeColouring":
        """The colouring carried along the vertex renaming ``v -> perm[v]``."""
        moved = {edge(perm[u], perm[v]): c for (u, v), c in zip(self.edges, self.colours)}
        edges = tuple(sorted(moved))
        return EdgeColouring(edges, tuple(moved[e] for e in edges), self.k)

    def colours_used(self) -> int:
        return len(set(self.colours))

    def to_text(self) -> str:
        return "".join(f"{u} {v} {c}\n" for (u, v), c in zip(self.edges, self.colours))


def parse_colouring(g: Graph, text: str) -> EdgeColouring:
    colour_of = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = line.split()
        if not toks:
            continue
        if len(toks) != 3:
            raise ValueError(f"line {lineno}: expected 'u v colour'")
        u, v, c = map(int, toks)
        e = edge(u, v)
        if e not in g.edge_index:
            raise ValueError(f"line {lineno}: ({u}, {v}) is not an edge")
        colour_of[e] = c
    return EdgeColouring.from_mapping(g, colour_of)


def _check_owner(g: Graph, c: EdgeColouring) -> None:
    if c.edges != g.edges:
        raise ValueError("colouring does not belong to this graph")


def preserves(g: Graph, c: EdgeColouring, p: Sequence[int]) -> bool:
    _check_owner(g, c)
    return all(c.colour_of(p[u], p[v]) == col for (u, v), col in zip(g.edges, c.colours))


def preserved_mask(g: Graph, c: EdgeColouring, targets: Sequence[Sequence[int]]) -> np.ndarray:
    """Boolean per target: does ``c`` survive it?"""
    _check_owner(g, c)
    col = np.asarray(c.colours, dtype=np.int64)
    ep = edge_permutations(g, targets)
    return (col[ep] == col).all(axis=1)


def breaks_all(g: Graph, c: EdgeColouring, targets: Sequence[Sequence[int]]) -> bool:
    if not len(targets):
        return True
    return not preserved_mask(g, c, targets).any()


def preserving_automorphisms(g: Graph, c: EdgeColouring, grp: AutGroup) -> list[Permutation]:
    mask = preserved_mask(g, c, grp.elements)
    return [p for p, keep in zip(grp.elements, mask) if keep]


class AlmostDistinguishingWitness(NamedTuple):
    x: int
    y: int


def find_almost_distinguishing_witness(
    g: Graph, c: EdgeColouring, grp: AutGroup
) -> tuple[str, AlmostDistinguishingWitness | None]:
    """Classify ``c`` and return the least pair every non-trivial preserver swaps.

    The first item is one of ``DISTINGUISHING``, ``ALMOST_DISTINGUISHING`` or
    ``NOT_ALMOST_DISTINGUISHING``; the witness is set only in the middle case.
    """
    e = identity(g.n)
    movers = [p for p in preserving_automorphisms(g, c, grp) if p != e]
    return _witness_from_preservers(movers)


def _witness_from_preservers(movers: Iterable[Sequence[int]]):
    common: set[tuple[int, int]] | None = None
    for p in movers:
        swaps = {(v, w) for v, w in enumerate(p) if v < w and p[w] == v}
        common = swaps if common is None else common & swaps
        if not common:
            return NOT_ALMOST_DISTINGUISHING, None
    if common is None:
        return DISTINGUISHING, None
    return ALMOST_DISTINGUISHING, AlmostDistinguishingWitness(*min(common))


def _colour_matrix(g: Graph, c: EdgeColouring) -> list[list[int]]:
    mat = [[0] * g.n for _ in range(g.n)]
    for (u, v), col in zip(g.edges, c.colours):
        mat[u][v] = mat[v][u] = col
    return mat


def coloured_isomorphism(
    g1: Graph, c1: EdgeColouring, g2: Graph, c2: EdgeColouring
) -> Permutation | None:
    """A vertex bijection carrying ``(g1, c1)`` onto ``(g2, c2)``, or None.

    Colour ids are matched literally.
    """
    if max(g1.n, g2.n) > MAX_ISOMORPHISM_ORDER:
        raise ValueError(f"exhaustive isomorphism search limited to n <= {MAX_ISOMORPHISM_ORDER}")
    _check_owner(g1, c1)
    _check_owner(g2, c2)
    if g1.n != g2.n or sorted(c1.colours) != sorted(c2.colours):
        return None
    n = g1.n
    a, b = _colour_matrix(g1, c1), _colour_matrix(g2, c2)
    sig1 = [tuple(sorted(row)) for row in a]
    sig2 = [tuple(sorted(row)) for row in b]
    if sorted(sig1) != sorted(sig2):
        return None
    order = sorted(range(n), key=lambda v: (sum(1 for s in sig1 if s == sig1[v]), v))
    img = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if used[w] or sig2[w] != sig1[v]:
                continue
            if all(a[v][order[j]] == b[w][img[order[j]]] for j in range(i)):
                img[v] = w
                used[w] = True
                if extend(i + 1):
                    return True
                used[w] = False
        img[v] = -1
        return False

    return tuple(img) if extend(0) else None


def coloured_isomorphic(g1: Graph, c1: EdgeColouring, g2: Graph, c2: EdgeColouring) -> bool:
    return coloured_isomorphism(g1, c1, g2, c2) is not None
