import itertools

import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

from cliquechrom.graph import Graph

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")


@st.composite
def graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, chosen) if keep])


def brute_maximal_cliques(g: Graph, min_size: int = 1) -> set[frozenset]:
    """Oracle: scan every subset through the adjacency matrix."""
    mat = g.to_matrix()
    cliques = []
    for r in range(1, g.n + 1):
        for sub in itertools.combinations(range(g.n), r):
            if all(mat[u, v] for u, v in itertools.combinations(sub, 2)):
                cliques.append(frozenset(sub))
    found = set(cliques)
    out = set()
    for c in cliques:
        if len(c) < min_size:
            continue
        if not any(c | {w} in found for w in range(g.n) if w not in c):
            out.add(c)
    return out


@pytest.fixture
def c5():
    return Graph.cycle(5)


@pytest.fixture
def p3():
    return Graph.path(3)
