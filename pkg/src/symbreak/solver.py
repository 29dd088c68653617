"""Exact distinguishing index and small distinguishing index.

Search for a breaking colouring runs in two phases: seeded random restarts
with greedy single-edge recolouring, then an exhaustive sweep that proves
non-existence.  The sweep walks colourings in base-``k`` counter order over
the sorted edge list (first edge is the most significant digit) and extends
prefixes in numpy blocks, dropping a prefix as soon as some target whose
moved edges are all decided is preserved.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .colouring import (
    ALMOST_DISTINGUISHING,
    DISTINGUISHING,
    EdgeColouring,
    breaks_all,
)
from .graph import Graph, to_graph6
from .symmetry import (
    AutGroup,
    Permutation,
    automorphism_group,
    edge_permutations,
    has_prime_order,
    small_automorphisms,
)

log = logging.getLogger(__name__)

INFINITE = "INFINITE"
EXCEEDS = "exceeds"

NO_SYMMETRY = "no-symmetry-shortcut"
HEURISTIC = "heuristic-search"
EXHAUSTIVE = "exhaustive"

DEFAULT_MAX_K = 4
DEFAULT_BUDGET = 8
MAX_ENUMERATION_EDGES = 24
_BLOCK = 1 << 16


@dataclass(frozen=True)
class IndexResult:
    value: int | str
    witness: EdgeColouring | None
    method: str

    @property
    def finite(self) -> bool:
        return isinstance(self.value, int)


def index_le(a: int | str, b: int | str) -> bool | None:
    """``a <= b`` for index values; None when either side is not a number."""
    if isinstance(a, int) and isinstance(b, int):
        return a <= b
    return None


def graph_seed(g: Graph, salt: str = "") -> int:
    digest = hashlib.sha256((to_graph6(g) + salt).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _edge_action_table(g: Graph, targets: Sequence[Sequence[int]]) -> np.ndarray:
    """Distinct non-trivial edge actions of ``targets`` (one row each)."""
    ep = edge_permutations(g, targets)
    if len(ep) == 0:
        return ep
    ep = np.unique(ep, axis=0)
    keep = (ep != np.arange(g.m)).any(axis=1)
    return ep[keep]


def _has_edge_trivial(g: Graph, targets: Sequence[Sequence[int]]) -> bool:
    if not len(targets):
        return False
    ep = edge_permutations(g, targets)
    return bool((ep == np.arange(g.m)).all(axis=1).any())


def _preserved_count(cols: np.ndarray, ep: np.ndarray) -> np.ndarray:
    """For each colouring row, how many edge actions it survives."""
    return (cols[:, ep] == cols[:, None, :]).all(axis=2).sum(axis=1)


def _local_search(ep: np.ndarray, m: int, k: int, rng: np.random.Generator, budget: int):
    flips = [(e, c) for e in range(m) for c in range(1, k + 1)]
    for _ in range(budget):
        col = rng.integers(1, k + 1, size=m)
        score = int(_preserved_count(col[None, :], ep)[0])
        for _ in range(2 * m + 2):
            if score == 0:
                return col
            cand = np.repeat(col[None, :], len(flips), axis=0)
            for i, (e, c) in enumerate(flips):
                cand[i, e] = c
            scores = _preserved_count(cand, ep)
            best = int(np.argmin(scores))
            if scores[best] >= score:
                break
            col, score = cand[best], int(scores[best])
        if score == 0:
            return col
    return None


def _exhaustive(ep: np.ndarray, m: int, k: int):
    """Least-counter colouring surviving no row of ``ep``, or None."""
    if m == 0:
        return np.zeros(0, dtype=np.int64) if len(ep) == 0 else None
    moved = ep != np.arange(m)
    # depth at which each target's moved edges are all decided
    last = np.where(moved, np.arange(m), -1).max(axis=1)
    checks: list[list[tuple[np.ndarray, np.ndarray]]] = [[] for _ in range(m)]
    for row, d in zip(ep, last):
        sup = np.flatnonzero(row != np.arange(m))
        checks[d].append((sup, row[sup]))
    digits = np.arange(1, k + 1, dtype=np.int8)

    def descend(prefix: np.ndarray, depth: int):
        if depth == m:
            return prefix[0] if len(prefix) else None
        nxt = np.empty((len(prefix) * k, depth + 1), dtype=np.int8)
        nxt[:, :depth] = np.repeat(prefix, k, axis=0)
        nxt[:, depth] = np.tile(digits, len(prefix))
        alive = np.ones(len(nxt), dtype=bool)
        for sup, img in checks[depth]:
            alive &= ~(nxt[:, sup] == nxt[:, img]).all(axis=1)
        nxt = nxt[alive]
        for start in range(0, len(nxt), _BLOCK):
            found = descend(nxt[start:start + _BLOCK], depth + 1)
            if found is not None:
                return found
        return None

    return descend(np.zeros((1, 0), dtype=np.int8), 0)


def _search(g, k, targets, budget, seed):
    if not len(targets):
        return EdgeColouring.monochromatic(g), NO_SYMMETRY
    if _has_edge_trivial(g, targets):
        return None, EXHAUSTIVE
    ep = _edge_action_table(g, targets)
    m = g.m
    if k == 1:
        return (EdgeColouring.monochromatic(g), NO_SYMMETRY) if len(ep) == 0 else (None, EXHAUSTIVE)
    rng = np.random.default_rng(graph_seed(g, f"k={k}") if seed is None else seed)
    col = _local_search(ep, m, k, rng, budget)
    if col is not None:
        return EdgeColouring.for_graph(g, col.tolist(), k), HEURISTIC
    col = _exhaustive(ep, m, k)
    if col is None:
        return None, EXHAUSTIVE
    return EdgeColouring.for_graph(g, col.tolist(), k), EXHAUSTIVE


def find_breaking_colouring(
    g: Graph,
    k: int,
    targets: Sequence[Sequence[int]],
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
) -> EdgeColouring | None:
    """A ``k``-colouring breaking every target, or None if none exists.

    None is only returned once the exhaustive sweep (or an edge-trivial
    target) has proved that no such colouring exists.
    """
    if k < 1:
        raise ValueError("k must be positive")
    return _search(g, k, targets, budget, seed)[0]


def exhaustive_breaking_colouring(g: Graph, k: int, targets: Sequence[Sequence[int]]) -> EdgeColouring | None:
    """Canonical (least-counter) breaking colouring, skipping the random phase."""
    if not len(targets):
        return EdgeColouring.monochromatic(g)
    ep = _edge_action_table(g, targets)
    if _has_edge_trivial(g, targets):
        return None
    col = _exhaustive(ep, g.m, k)
    return None if col is None else EdgeColouring.for_graph(g, col.tolist(), k)


def _index(g, targets, all_targets, max_k, budget, seed):
    if not all_targets:
        if g.m == 0:
            return IndexResult(1, EdgeColouring(g.edges, (), 1), NO_SYMMETRY)
        return IndexResult(1, EdgeColouring.monochromatic(g), NO_SYMMETRY)
    if _has_edge_trivial(g, all_targets):
        return IndexResult(INFINITE, None, EXHAUSTIVE)
    for k in range(2, max_k + 1):
        col, method = _search(g, k, targets, budget, seed)
        if col is not None:
            if not breaks_all(g, col, all_targets):
                raise AssertionError(f"witness fails verification for {to_graph6(g)} at k={k}")
            return IndexResult(k, col, method)
    return IndexResult(EXCEEDS, None, EXHAUSTIVE)


def distinguishing_index(
    g: Graph,
    max_k: int = DEFAULT_MAX_K,
    grp: AutGroup | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
) -> IndexResult:
    grp = automorphism_group(g) if grp is None else grp
    movers = grp.non_identity()
    # a colouring has a non-trivial stabiliser iff it is fixed by an element of prime order
    reduced = [p for p in movers if has_prime_order(p)]
    return _index(g, reduced, movers, max_k, budget, seed)


def small_distinguishing_index(
    g: Graph,
    max_k: int = DEFAULT_MAX_K,
    grp: AutGroup | None = None,
    small: Sequence[Permutation] | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int | None = None,
) -> IndexResult:
    if small is None:
        grp = automorphism_group(g) if grp is None else grp
        small = small_automorphisms(g, grp)
    return _index(g, small, list(small), max_k, budget, seed)


@dataclass
class DistinguishingOutcome:
    """Result of :func:`find_distinguishing_or_almost`.

    ``kind`` is ``DISTINGUISHING``, ``ALMOST_DISTINGUISHING`` or ``"none"``.
    Almost-distinguishing colourings are grouped twice: up to colour-preserving
    isomorphism with literal colour ids, and additionally allowing any
    renaming of the colours.
    """

    kind: str
    colouring: EdgeColouring | None = None
    literal_classes: list[list[EdgeColouring]] = field(default_factory=list)
    renaming_classes: list[list[EdgeColouring]] = field(default_factory=list)


def _orbit_keys(cols: np.ndarray, ep_all: np.ndarray, renamings: list[np.ndarray]) -> list[bytes]:
    # colourings of one graph are isomorphic iff an automorphism maps one onto the other
    keys = []
    for col in cols:
        variants = np.concatenate([r[col][ep_all] for r in renamings])
        keys.append(min(v.tobytes() for v in variants))
    return keys


def _group(g, cols, ep_all, renamings, k):
    keys = _orbit_keys(cols, ep_all, renamings)
    classes: dict[bytes, list[EdgeColouring]] = {}
    for key, col in zip(keys, cols):
        classes.setdefault(key, []).append(EdgeColouring.for_graph(g, col.tolist(), k))
    return list(classes.values())


def find_distinguishing_or_almost(
    g: Graph,
    k: int = 2,
    grp: AutGroup | None = None,
    seed: int | None = None,
) -> DistinguishingOutcome:
    if g.m > MAX_ENUMERATION_EDGES:
        raise ValueError(f"enumerating {k}^{g.m} colourings exceeds the m <= {MAX_ENUMERATION_EDGES} limit")
    grp = automorphism_group(g) if grp is None else grp
    movers = grp.non_identity()
    reduced = [p for p in movers if has_prime_order(p)]
    if not movers:
        return DistinguishingOutcome(DISTINGUISHING, EdgeColouring(g.edges, (1,) * g.m, k))
    if not _has_edge_trivial(g, movers):
        col, _ = _search(g, k, reduced, DEFAULT_BUDGET, seed)
        if col is not None:
            return DistinguishingOutcome(DISTINGUISHING, col)
    ep = edge_permutations(g, movers)
    found = []
    total = k ** g.m
    for start in range(0, total, _BLOCK):
        idx = np.arange(start, min(total, start + _BLOCK), dtype=np.int64)
        cols = np.empty((len(idx), g.m), dtype=np.int8)
        rest = idx.copy()
        for e in range(g.m - 1, -1, -1):
            cols[:, e] = rest % k + 1
            rest //= k
        preserved = (cols[:, ep] == cols[:, None, :]).all(axis=2).sum(axis=1)
        # every non-trivial preserver swaps one fixed pair iff there is exactly one
        found.append(cols[preserved == 1])
    almost = np.concatenate(found) if found else np.zeros((0, g.m), dtype=np.int8)
    if len(almost) == 0:
        return DistinguishingOutcome("none")
    ep_all = edge_permutations(g, grp.elements)
    base = np.arange(k + 1)
    literal = _group(g, almost, ep_all, [base], k)
    renamings = [np.concatenate([[0], np.array(p) + 1]) for p in itertools.permutations(range(k))]
    renamed = _group(g, almost, ep_all, renamings, k)
    return DistinguishingOutcome(ALMOST_DISTINGUISHING, None, literal, renamed)
