from pathlib import Path

import pytest

from symbreak.graph import parse_graph6

CORPORA = Path(__file__).resolve().parent.parent / "corpora"


def corpus_lines(name: str) -> list[str]:
    return [ln.strip() for ln in (CORPORA / name).read_text().splitlines() if ln.strip()]


def corpus(name: str):
    return [parse_graph6(s) for s in corpus_lines(name)]


def all_graphs(max_order: int):
    out = []
    for n in range(1, max_order + 1):
        out.extend(corpus(f"graph{n}.g6"))
    return out


@pytest.fixture(scope="session")
def graphs_upto_5():
    return all_graphs(5)


@pytest.fixture(scope="session")
def graphs_upto_6():
    return all_graphs(6)
