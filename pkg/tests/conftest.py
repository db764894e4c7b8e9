import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from intrinsic_im.graph import InfluenceGraph

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def chain(alpha_u=0.6, alpha_v=0.2, w=1.0):
    return InfluenceGraph.from_edges([(0, 1, w)], alpha=[alpha_u, alpha_v],
                                     labels=["u", "v"])


@pytest.fixture
def chain_graph():
    return chain()


@st.composite
def small_graphs(draw, max_nodes=4, max_edges=8, normalize=False):
    """Random simple digraphs with float weights/alphas drawn from a grid.

    Grid values keep exact rational checks cheap and include 0 and 1.
    """
    n = draw(st.integers(1, max_nodes))
    pairs = [(u, v) for u, v in itertools.permutations(range(n), 2)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True,
                           max_size=min(max_edges, len(pairs))) if pairs else st.just([]))
    grid = st.sampled_from([0.0, 0.125, 0.25, 0.5, 0.75, 0.875, 1.0])
    w = [draw(grid) for _ in chosen]
    alpha = [draw(grid) for _ in range(n)]
    src = [u for u, _ in chosen]
    dst = [v for _, v in chosen]
    return InfluenceGraph(n, src, dst, w, alpha=alpha)


def all_subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


def random_small_graph(rng, n_nodes=4, max_edges=8):
    from intrinsic_im.generators import random_graph

    return random_graph(n_nodes, max_edges, rng, normalize=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, then assert."""
    def record(number, title, ok, detail):
        line = f"[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
