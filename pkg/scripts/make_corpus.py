#!/usr/bin/env python3
"""Build graph6 corpora of all non-isomorphic graphs on up to N vertices.

Graphs on n+1 vertices are grown from every graph on n vertices by adding a
vertex with each possible neighbourhood; duplicates are removed with nauty
certificates (pynauty).  Dev-only tool; the package does not import it.

    python scripts/make_corpus.py --max-order 8 --out corpora
"""

from __future__ import annotations

import argparse
from pathlib import Path

import networkx as nx
import pynauty

# OEIS A000088 / A001349
KNOWN_ALL = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044, 8: 12346, 9: 274668}
KNOWN_CONNECTED = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117, 9: 261080}


def certificate(n, adj):
    g = pynauty.Graph(n, adjacency_dict={v: sorted(adj[v]) for v in range(n)})
    return pynauty.certificate(g)


def canonical_graph(n, adj):
    g = pynauty.Graph(n, adjacency_dict={v: sorted(adj[v]) for v in range(n)})
    lab = pynauty.canon_label(g)
    pos = {v: i for i, v in enumerate(lab)}
    return [{pos[w] for w in adj[v]} for v in lab]


def grow(graphs, n):
    seen = {}
    for adj in graphs:
        for mask in range(1 << n):
            new = [set(a) for a in adj] + [set()]
            for v in range(n):
                if mask >> v & 1:
                    new[v].add(n)
                    new[n].add(v)
            key = certificate(n + 1, new)
            if key not in seen:
                seen[key] = canonical_graph(n + 1, new)
    return list(seen.values())


def to_g6(n, adj):
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((u, v) for u in range(n) for v in adj[u] if u < v)
    return nx.to_graph6_bytes(g, header=False).decode().strip()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-order", type=int, default=8)
    ap.add_argument("--out", type=Path, default=Path("corpora"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    graphs = [[set()]]
    for n in range(1, args.max_order + 1):
        if n > 1:
            graphs = grow(graphs, n - 1)
        lines = sorted(to_g6(n, adj) for adj in graphs)
        conn = sorted(
            to_g6(n, adj) for adj in graphs if nx.is_connected(nx.Graph({v: adj[v] for v in range(n)}))
            or n == 1
        )
        assert len(lines) == KNOWN_ALL[n], (n, len(lines))
        assert len(conn) == KNOWN_CONNECTED[n], (n, len(conn))
        (args.out / f"graph{n}.g6").write_text("\n".join(lines) + "\n")
        (args.out / f"graph{n}c.g6").write_text("\n".join(conn) + "\n")
        print(n, len(lines), len(conn))


if __name__ == "__main__":
    main()
