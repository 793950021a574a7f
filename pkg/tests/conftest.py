import random
from functools import lru_cache

import networkx as nx
import pytest
from hypothesis import strategies as st

from blocksieve.graph import Graph
from oracles import to_graph


@lru_cache(maxsize=None)
def atlas(max_n: int = 7, connected: bool = False):
    """Every graph on 1..max_n vertices (up to isomorphism), from the networkx atlas."""
    out = []
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() > max_n:
            continue
        if connected and not nx.is_connected(G):
            continue
        out.append(to_graph(G))
    return tuple(out)


def random_graph(rng: random.Random, n: int, p: float | None = None, connected: bool = False) -> Graph:
    p = rng.uniform(0.15, 0.7) if p is None else p
    while True:
        G = nx.gnp_random_graph(n, p, seed=rng.randrange(2**31))
        if not connected or nx.is_connected(G):
            return to_graph(G)
        p = min(1.0, p + 0.05)


@st.composite
def graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(range(n), [e for e, keep in zip(pairs, mask) if keep])


@st.composite
def connected_graphs(draw, min_n=1, max_n=8):
    """Random spanning tree plus extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for v in range(1, n):
        edges.add((draw(st.integers(0, v - 1)), v))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges.update(e for e, keep in zip(pairs, mask) if keep)
    return Graph(range(n), edges)


@pytest.fixture
def rng():
    return random.Random(20240611)


# filled by test_acceptance, printed after the run
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
