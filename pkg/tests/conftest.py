import random

import pytest
from hypothesis import settings, strategies as st

from cliquepack.graph import Graph

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, keep in zip(pairs, mask) if keep])


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph(n, [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p])


@pytest.fixture
def tmp_graph(tmp_path):
    from cliquepack.graph import write_graph

    def make(g: Graph, name="g.graph"):
        path = tmp_path / name
        write_graph(g, path)
        return str(path)

    return make


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
