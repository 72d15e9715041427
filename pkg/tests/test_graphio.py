from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linforest.graph import SimpleGraph
from linforest.graphio import format_edgelist, from_graph6, parse_edgelist, parse_graph_text, read_graph, to_graph6
from oracles import from_networkx


@st.composite
def graphs(draw, max_n=70):
    n = draw(st.integers(0, max_n))
    edges = draw(st.sets(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))), max_size=60))
    return SimpleGraph.from_edges(n, {tuple(sorted(e)) for e in edges if e[0] != e[1]})


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_edgelist_round_trip(g):
    assert parse_edgelist(format_edgelist(g)) == g


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_graph6_round_trip_and_agrees_with_networkx(g):
    text = to_graph6(g)
    assert from_graph6(text) == g
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    assert nx.to_graph6_bytes(h, header=False).decode().strip() == text
    assert from_networkx(nx.from_graph6_bytes(text.encode())) == g


def test_graph6_header_and_large_n():
    g = SimpleGraph.from_edges(100, [(0, 99), (5, 6)])
    text = to_graph6(g, header=True)
    assert text.startswith(">>graph6<<")
    assert from_graph6(text) == g


def test_parse_edgelist_comments_and_errors():
    g = parse_edgelist("# triangle\n3 3\n0 1\n1 2  # side\n\n0 2\n")
    assert g == SimpleGraph.complete(3)
    with pytest.raises(ValueError, match="announces"):
        parse_edgelist("3 2\n0 1\n")
    with pytest.raises(ValueError, match="empty"):
        parse_edgelist("# nothing\n")
    with pytest.raises(ValueError, match="loop"):
        parse_edgelist("2 1\n1 1\n")


def test_sniffing_and_file_read(tmp_path):
    k4 = SimpleGraph.complete(4)
    assert parse_graph_text(to_graph6(k4) + "\n") == k4
    assert parse_graph_text(format_edgelist(k4)) == k4
    path = tmp_path / "k4.g6"
    path.write_text(to_graph6(k4, header=True))
    assert read_graph(path) == k4
