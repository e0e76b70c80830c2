import pytest
from hypothesis import strategies as st

from edgebicon.graph import Graph, generate


@pytest.fixture
def p3():
    return generate("path", 3)


@pytest.fixture
def c4():
    return generate("cycle", 4)


@pytest.fixture
def barbell3():
    return generate("barbell", 3)


@st.composite
def connected_graphs(draw, min_n=1, max_n=12):
    """Random tree plus random extra edges: always connected."""
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    edges = {(p, v) for v, p in zip(range(1, n), parents)}
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if pairs:
        extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n))
        edges |= set(extra)
    perm = draw(st.permutations(range(n)))
    return Graph(n, [(perm[u], perm[v]) for u, v in edges])
