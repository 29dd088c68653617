"""Permutations, automorphism groups, orbits and the small-automorphism test.

Groups are stored as the complete, lexicographically sorted element list.
That is affordable for the orders this package targets (n <= 12) and lets
colouring checks run over every element as one numpy operation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, bits

Permutation = tuple[int, ...]

DEFAULT_ENUMERATION_LIMIT = 12


class GroupTooLargeError(ValueError):
    """The graph exceeds the order for which full enumeration is allowed."""


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """``p after q``: v -> p[q[v]]."""
    return tuple(p[x] for x in q)


def inverse(p: Sequence[int]) -> Permutation:
    inv = [0] * len(p)
    for v, w in enumerate(p):
        inv[w] = v
    return tuple(inv)


def cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        cyc = []
        v = s
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = p[v]
        out.append(tuple(cyc))
    return out


def permutation_order(p: Sequence[int]) -> int:
    return math.lcm(*(len(c) for c in cycles(p))) if len(p) else 1


def _is_prime(k: int) -> bool:
    return k >= 2 and all(k % d for d in range(2, math.isqrt(k) + 1))


def has_prime_order(p: Sequence[int]) -> bool:
    return _is_prime(permutation_order(p))


@dataclass(frozen=True)
class AutGroup:
    n: int
    elements: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64).reshape(len(self.elements), self.n)

    def non_identity(self) -> list[Permutation]:
        e = identity(self.n)
        return [p for p in self.elements if p != e]

    def is_trivial(self) -> bool:
        return self.order == 1

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p):
        return tuple(p) in set(self.elements)


@dataclass(frozen=True)
class OrbitPartition:
    classes: tuple[frozenset[int], ...]
    class_of: tuple[int, ...]

    def orbit_of(self, v: int) -> frozenset[int]:
        return self.classes[self.class_of[v]]


def is_automorphism(g: Graph, p: Sequence[int]) -> bool:
    if len(p) != g.n:
        raise ValueError(f"permutation has length {len(p)}, graph has {g.n} vertices")
    if sorted(p) != list(range(g.n)):
        raise ValueError("not a permutation of the vertex set")
    for u in range(g.n):
        image_row = 0
        for w in bits(g.rows[u]):
            image_row |= 1 << p[w]
        if image_row != g.rows[p[u]]:
            return False
    return True


def equitable_partition(g: Graph) -> list[int]:
    """Colour refinement from the degree partition to its fixed point.

    Returns a cell index per vertex.  Cells are numbered by their sorted
    signatures, so the numbering is isomorphism invariant.
    """
    colour = [g.degree(v) for v in range(g.n)]
    ncells = len(set(colour))
    while True:
        sig = [(colour[v], tuple(sorted(colour[w] for w in bits(g.rows[v])))) for v in range(g.n)]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        colour = [rank[s] for s in sig]
        if len(rank) == ncells:
            return colour
        ncells = len(rank)


def _search_order(g: Graph, cell: list[int]) -> list[int]:
    # Greedy order: most neighbours already placed, then smallest cell, then id.
    size = [0] * (max(cell) + 1 if cell else 0)
    for c in cell:
        size[c] += 1
    order: list[int] = []
    placed = 0
    remaining = set(range(g.n))
    while remaining:
        v = min(remaining, key=lambda u: (-(g.rows[u] & placed).bit_count(), size[cell[u]], cell[u], u))
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    return order


def automorphism_group(g: Graph, enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT) -> AutGroup:
    """All automorphisms of ``g`` by backtracking within the equitable partition."""
    if g.n > enumeration_limit:
        raise GroupTooLargeError(f"n={g.n} exceeds enumeration limit {enumeration_limit}")
    n = g.n
    if n == 0:
        return AutGroup(0, ((),))
    cell = equitable_partition(g)
    order = _search_order(g, cell)
    candidates = [[w for w in range(n) if cell[w] == cell[v]] for v in order]
    # for position i: earlier positions adjacent to order[i]
    earlier_nbrs = [[j for j in range(i) if g.has_edge(order[i], order[j])] for i in range(n)]
    rows = g.rows
    img = [0] * n  # image of order[j], by position j
    found: list[Permutation] = []

    def extend(i: int, used: int) -> None:
        if i == n:
            perm = [0] * n
            for j, v in enumerate(order):
                perm[v] = img[j]
            found.append(tuple(perm))
            return
        need = 0
        for j in earlier_nbrs[i]:
            need |= 1 << img[j]
        for w in candidates[i]:
            if used >> w & 1:
                continue
            if rows[w] & used != need:
                continue
            img[i] = w
            extend(i + 1, used | 1 << w)

    extend(0, 0)
    found.sort()
    return AutGroup(n, tuple(found))


def is_small(g: Graph, p: Sequence[int]) -> bool:
    return any(w != v and g.rows[v] >> w & 1 for v, w in enumerate(p))


def small_automorphisms(g: Graph, grp: AutGroup) -> list[Permutation]:
    return [p for p in grp.elements if is_small(g, p)]


def vertex_orbits(grp: AutGroup | Iterable[Sequence[int]], n: int) -> OrbitPartition:
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    elements = grp.elements if isinstance(grp, AutGroup) else grp
    for p in elements:
        for v, w in enumerate(p):
            a, b = find(v), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, set[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), set()).add(v)
    classes = tuple(frozenset(s) for _, s in sorted(groups.items()))
    class_of = [0] * n
    for i, c in enumerate(classes):
        for v in c:
            class_of[v] = i
    return OrbitPartition(classes, tuple(class_of))


def setwise_stabilizer(grp: AutGroup, s: Iterable[int]) -> AutGroup:
    members = frozenset(s)
    if not members or len(members) == grp.n:
        return grp
    kept = tuple(p for p in grp.elements if all(p[v] in members for v in members))
    return AutGroup(grp.n, kept)


def edge_permutations(g: Graph, perms: Sequence[Sequence[int]]) -> np.ndarray:
    """Row ``i`` maps edge index ``e`` to the index of ``perms[i](e)``."""
    m = g.m
    if not len(perms):
        return np.zeros((0, m), dtype=np.int64)
    lookup = np.full((g.n, g.n), -1, dtype=np.int64)
    for i, (u, v) in enumerate(g.edges):
        lookup[u, v] = lookup[v, u] = i
    arr = np.asarray(perms, dtype=np.int64).reshape(len(perms), g.n)
    if m == 0:
        return np.zeros((len(perms), 0), dtype=np.int64)
    us = np.array([u for u, _ in g.edges])
    vs = np.array([v for _, v in g.edges])
    out = lookup[arr[:, us], arr[:, vs]]
    if (out < 0).any():
        raise ValueError("a permutation does not map edges to edges")
    return out


def acts_trivially_on_edges(g: Graph, p: Sequence[int]) -> bool:
    """True when ``p`` fixes every edge, so no edge colouring can break it."""
    return all({p[u], p[v]} == {u, v} for u, v in g.edges)
