import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symbreak.colouring import (
    ALMOST_DISTINGUISHING,
    DISTINGUISHING,
    NOT_ALMOST_DISTINGUISHING,
    AlmostDistinguishingWitness,
    EdgeColouring,
    breaks_all,
    coloured_isomorphic,
    find_almost_distinguishing_witness,
    parse_colouring,
    preserves,
    preserving_automorphisms,
)
from symbreak.graph import Graph, complete_graph, cycle_graph, path_graph
from symbreak.symmetry import automorphism_group, compose, identity, inverse, small_automorphisms

from conftest import corpus

P3 = path_graph(3)
K2 = complete_graph(2)
C4 = cycle_graph(4)
REVERSAL = (2, 1, 0)


def col(g, *colours):
    return EdgeColouring.for_graph(g, colours)


def test_preserves_examples():
    mono = EdgeColouring.monochromatic(C4)
    assert all(preserves(C4, mono, p) for p in automorphism_group(C4))
    assert not preserves(P3, col(P3, 1, 2), REVERSAL)
    assert preserves(P3, col(P3, 1, 2), identity(3))


def test_breaks_all_examples():
    assert breaks_all(K2, col(K2, 1), [])
    assert not breaks_all(K2, col(K2, 2), [(1, 0)])
    assert breaks_all(P3, col(P3, 1, 2), [REVERSAL])


def test_colouring_validation():
    with pytest.raises(ValueError):
        EdgeColouring(P3.edges, (1,), 2)
    with pytest.raises(ValueError):
        EdgeColouring(P3.edges, (1, 3), 2)
    with pytest.raises(ValueError):
        preserves(C4, col(P3, 1, 1), identity(4))


def test_witness_examples():
    asym = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 4), (0, 2)])
    grp = automorphism_group(asym)
    assert find_almost_distinguishing_witness(asym, EdgeColouring.monochromatic(asym), grp) == (DISTINGUISHING, None)
    assert find_almost_distinguishing_witness(K2, col(K2, 1), automorphism_group(K2)) == (
        ALMOST_DISTINGUISHING,
        AlmostDistinguishingWitness(0, 1),
    )
    status, w = find_almost_distinguishing_witness(C4, EdgeColouring.monochromatic(C4), automorphism_group(C4))
    assert (status, w) == (NOT_ALMOST_DISTINGUISHING, None)


def test_witness_is_least_pair():
    # P3 plus a pendant pair swapped together: (0 2)(3 4) preserves the monochromatic colouring
    g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 3), (2, 4)])
    status, w = find_almost_distinguishing_witness(g, EdgeColouring.monochromatic(g), automorphism_group(g))
    assert status == ALMOST_DISTINGUISHING and w == (0, 2)


def test_coloured_isomorphic_examples():
    assert coloured_isomorphic(P3, col(P3, 1, 2), P3, col(P3, 1, 2))
    assert not coloured_isomorphic(K2, col(K2, 1), K2, EdgeColouring(K2.edges, (2,), 2))
    assert coloured_isomorphic(P3, col(P3, 1, 2), P3, col(P3, 2, 1))
    assert not coloured_isomorphic(P3, col(P3, 1, 1), complete_graph(3), EdgeColouring.monochromatic(complete_graph(3)))


def brute_coloured_isomorphic(g1, c1, g2, c2):
    if g1.n != g2.n:
        return False
    d1, d2 = c1.as_dict(), c2.as_dict()
    for perm in itertools.permutations(range(g1.n)):
        moved = {tuple(sorted((perm[u], perm[v]))): c for (u, v), c in d1.items()}
        if moved == d2:
            return True
    return False


def test_coloured_isomorphic_matches_brute_force():
    graphs = [g for g in corpus("graph5.g6") if g.m <= 6]
    for g in graphs[:12]:
        cols = [EdgeColouring.for_graph(g, cs, 2) for cs in itertools.product((1, 2), repeat=g.m)]
        for c1 in cols[:6]:
            for c2 in cols:
                assert coloured_isomorphic(g, c1, g, c2) == brute_coloured_isomorphic(g, c1, g, c2)


def test_preserving_set_is_subgroup():
    for g in corpus("graph5.g6"):
        grp = automorphism_group(g)
        for cs in itertools.islice(itertools.product((1, 2), repeat=g.m), 8):
            c = EdgeColouring.for_graph(g, cs, 2)
            keep = set(preserving_automorphisms(g, c, grp))
            assert identity(g.n) in keep
            for p in keep:
                assert inverse(p) in keep
                for q in keep:
                    assert compose(p, q) in keep


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 155), st.data())
def test_swap_invariance_and_relabel_equivariance(idx, data):
    g = corpus("graph6.g6")[idx]
    grp = automorphism_group(g)
    c = EdgeColouring.for_graph(g, data.draw(st.lists(st.sampled_from((1, 2)), min_size=g.m, max_size=g.m)), 2)
    swapped = c.renamed({1: 2, 2: 1})
    q = tuple(data.draw(st.permutations(range(g.n))))
    h = g.relabel(q)
    ch = c.relabelled(q)
    for p in grp.elements:
        assert preserves(g, c, p) == preserves(g, swapped, p)
        conj = compose(compose(q, p), inverse(q))
        assert preserves(g, c, p) == preserves(h, ch, conj)


def test_small_breaking_implied_by_full_breaking():
    for g in corpus("graph5c.g6"):
        grp = automorphism_group(g)
        small = small_automorphisms(g, grp)
        for cs in itertools.islice(itertools.product((1, 2, 3), repeat=g.m), 30):
            c = EdgeColouring.for_graph(g, cs, 3)
            if breaks_all(g, c, grp.non_identity()):
                assert breaks_all(g, c, small)


def test_colouring_text_round_trip():
    c = col(C4, 1, 2, 2, 1)
    assert c.to_text() == "0 1 1\n0 3 2\n1 2 2\n2 3 1\n"
    assert parse_colouring(C4, c.to_text()) == c
    with pytest.raises(ValueError):
        parse_colouring(C4, "0 2 1\n")
