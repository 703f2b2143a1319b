from __future__ import annotations

from hypothesis import strategies as st

from pzf.graph import Graph


@st.composite
def graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


@st.composite
def connected_graphs(draw, min_n=2, max_n=7):
    """A random spanning tree plus random extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges |= {e for e, k in zip(pairs, keep) if k}
    return Graph.from_edges(n, sorted(edges))


@st.composite
def trees(draw, min_n=2, max_n=8):
    n = draw(st.integers(min_n, max_n))
    return Graph.from_edges(n, [(draw(st.integers(0, v - 1)), v) for v in range(1, n)])


def nonempty_subset(draw, n):
    return draw(st.integers(1, (1 << n) - 1))
