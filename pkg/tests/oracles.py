"""Brute-force references kept independent of the package's search code."""

import functools
import itertools

import numpy as np


def edge_action(g, p):
    idx = {e: i for i, e in enumerate(g.edges)}
    return [idx[tuple(sorted((p[u], p[v])))] for u, v in g.edges]


def brute_breaking(g, k, targets, chunk=4096):
    """First k-colouring in counter order (first edge most significant) breaking all targets."""
    m = g.m
    if not targets:
        return (1,) * m
    acts = np.array([edge_action(g, p) for p in targets], dtype=np.int64).reshape(len(targets), m)
    it = itertools.product(range(1, k + 1), repeat=m)
    while True:
        block = np.array(list(itertools.islice(it, chunk)), dtype=np.int64)
        if block.size == 0:
            return None
        block = block.reshape(-1, m)
        preserved = (block[:, acts] == block[:, None, :]).all(axis=2).any(axis=1)
        good = np.flatnonzero(~preserved)
        if len(good):
            return tuple(int(x) for x in block[good[0]])


def brute_index(g, targets, max_k):
    """(value, first witness) with 'INFINITE' / 'exceeds' sentinels."""
    if not targets:
        return 1, (1,) * g.m
    ident = list(range(g.m))
    if any(edge_action(g, p) == ident for p in targets):
        return "INFINITE", None
    for k in range(1, max_k + 1):
        found = brute_breaking(g, k, targets)
        if found is not None:
            return k, found
    return "exceeds", None


def preserved_by(g, colours, p):
    c = dict(zip(g.edges, colours))
    return all(c[tuple(sorted((p[u], p[v])))] == c[(u, v)] for u, v in g.edges)


@functools.lru_cache(maxsize=None)
def _all_perms(n):
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def naive_group(g):
    """All n! permutations filtered through the adjacency matrix."""
    n = g.n
    adj = np.array([[g.has_edge(u, v) for v in range(n)] for u in range(n)], dtype=bool).reshape(n, n)
    perms = _all_perms(n)
    images = adj[perms[:, :, None], perms[:, None, :]]
    keep = (images == adj).all(axis=(1, 2))
    return sorted(tuple(int(x) for x in p) for p in perms[keep])


def naive_small(g, perms):
    return [p for p in perms if any(g.has_edge(v, p[v]) for v in range(g.n))]


def distinct_actions(g, perms):
    """One representative per distinct action on the edge set."""
    seen = {}
    for p in perms:
        seen.setdefault(tuple(edge_action(g, p)), p)
    return list(seen.values())
