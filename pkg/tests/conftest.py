import os
import sys

import networkx as nx
import pytest
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from gencol.graph import Graph  # noqa: E402
from gencol.reach import VertexOrder  # noqa: E402


def from_nx(h) -> Graph:
    h = nx.convert_node_labels_to_integers(h)
    return Graph.from_edges(h.number_of_nodes(), h.edges())


@st.composite
def graphs(draw, min_n=1, max_n=7, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if p is None:
        keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        keep = [draw(st.floats(0, 1)) < p for _ in pairs]
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


@st.composite
def graph_and_order(draw, min_n=1, max_n=7):
    g = draw(graphs(min_n, max_n))
    perm = draw(st.permutations(list(range(g.n))))
    return g, VertexOrder(perm)


radii = st.sampled_from([1, 2, 3])


@pytest.fixture(scope="session")
def small_corpus():
    """Connected graphs on at most five vertices (the n <= 6 corpus lives in the acceptance suite)."""
    from oracles import connected_graphs

    return [from_nx(h) for h in connected_graphs(5)]
