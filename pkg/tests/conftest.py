import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from hdg.hypergraph import Hypergraph  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# the 3x3 grid with its last row removed, vertices 0..8 row by row
GRID_EDGES = [{0, 1, 2}, {3, 4, 5}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}]


@pytest.fixture
def grid():
    return Hypergraph.from_edges(9, GRID_EDGES)


@pytest.fixture
def single_edge():
    return Hypergraph.from_edges(3, [{0, 1, 2}])


@st.composite
def hypergraphs(draw, min_n=1, max_n=7, max_m=6, min_size=1, max_size=4, uniform=None, isolate_free=False):
    n = draw(st.integers(min_n, max_n))
    lo = uniform or min_size
    hi = uniform or max_size
    if lo > n:
        return Hypergraph.from_edges(n, [])
    hi = min(hi, n)
    edge = st.integers(lo, hi).flatmap(lambda s: st.lists(st.integers(0, n - 1), min_size=s, max_size=s, unique=True))
    edges = draw(st.lists(edge, max_size=max_m))
    H = Hypergraph.from_edges(n, edges)
    if isolate_free:
        # cover any isolated vertex by an extra edge through it
        extra = []
        for v in H.isolated_vertices():
            others = [u for u in range(n) if u != v][: hi - 1]
            if len(others) + 1 < lo:
                continue
            extra.append([v, *others])
        H = Hypergraph.from_edges(n, [sorted(e) for e in H.edges] + extra)
    return H
