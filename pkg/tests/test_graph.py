from __future__ import annotations

from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linforest.graph import (
    LinearForest,
    LinearForestDecomposition,
    SimpleGraph,
    add_edges,
    add_vertex,
    complement,
    conjecture_bound,
    decomposition_from_edge_sets,
    degree_profile,
    la_lower_bound,
    remove_edges,
    validate_decomposition,
    vertex_classes,
)
from oracles import from_networkx, star


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimpleGraph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def test_simple_graph_rejects_loops_parallels_and_range():
    with pytest.raises(ValueError, match="loop"):
        SimpleGraph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError, match="parallel"):
        SimpleGraph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError, match="outside"):
        SimpleGraph.from_edges(3, [(0, 3)])


def test_degree_profile_examples():
    assert degree_profile(SimpleGraph.complete(4)) == (3, 3, [3, 3, 3, 3])
    assert degree_profile(star(3)) == (3, 1, [1, 1, 1, 3])
    assert degree_profile(SimpleGraph.cycle(5)) == (2, 2, [2, 2, 2, 2, 2])
    with pytest.raises(ValueError):
        degree_profile(SimpleGraph.empty(0))


def test_vertex_classes_examples():
    c = vertex_classes(SimpleGraph.complete(4), Fraction(1, 10))
    assert c.max_set == c.delta_set == frozenset(range(4))
    assert c.middle_set == c.far_set == frozenset()
    assert c.gap == 0
    c = vertex_classes(star(3), Fraction(3, 5))
    assert c.gap == 2 and c.far_set == frozenset()
    c = vertex_classes(star(3), Fraction(2, 5))
    assert c.far_set == frozenset({1, 2, 3})


def test_vertex_classes_threshold_is_exact():
    # 0.1 * 10 = 1 exactly; a float comparison could drift
    g = SimpleGraph.from_edges(10, [(0, 1)])
    c = vertex_classes(g, 0.1)
    assert c.far_set == frozenset(range(2, 10))


@settings(max_examples=80, deadline=None)
@given(graphs(), st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20)))
def test_vertex_classes_partition(g, eta):
    c = vertex_classes(g, eta)
    assert c.delta_set | c.middle_set | c.max_set == frozenset(range(g.n))
    if c.gap:
        assert not (c.delta_set & c.max_set)
    assert not (c.middle_set & (c.delta_set | c.max_set))
    assert c.far_set == frozenset(v for v in range(g.n) if c.max_degree - g.degrees[v] >= eta * g.n)
    assert c.gap >= 0


def test_validate_decomposition_examples():
    c4 = SimpleGraph.cycle(4)
    ok = decomposition_from_edge_sets(4, [[(0, 1), (2, 3)], [(1, 2), (0, 3)]])
    assert validate_decomposition(c4, ok)
    bad = validate_decomposition(c4, decomposition_from_edge_sets(4, [c4.edges]))
    assert not bad and bad.reason == "cycle"
    k4 = SimpleGraph.complete(4)
    two_paths = decomposition_from_edge_sets(4, [[(0, 1), (1, 2), (2, 3)], [(1, 3), (0, 3), (0, 2)]])
    assert validate_decomposition(k4, two_paths)


def test_validate_decomposition_names_each_failure():
    p3 = SimpleGraph.path(3)
    assert validate_decomposition(p3, decomposition_from_edge_sets(3, [[(0, 1)]])).reason == "missing edge"
    twice = decomposition_from_edge_sets(3, [[(0, 1), (1, 2)], [(0, 1)]])
    assert validate_decomposition(p3, twice).reason == "repeated edge"
    foreign = decomposition_from_edge_sets(3, [[(0, 1), (1, 2), (0, 2)]])
    assert validate_decomposition(p3, foreign).reason == "foreign edge"
    claw = star(3)
    v = validate_decomposition(claw, decomposition_from_edge_sets(4, [claw.edges]))
    assert v.reason == "degree" and v.witness == 0
    v = validate_decomposition(p3, LinearForestDecomposition((LinearForest(4, frozenset(p3.edges)),)))
    assert v.reason == "host mismatch"


def test_complement_examples():
    assert complement(SimpleGraph.complete(4)) == SimpleGraph.empty(4)
    assert complement(SimpleGraph.empty(3)) == SimpleGraph.complete(3)
    c5c = complement(SimpleGraph.cycle(5))
    assert c5c.is_regular() and c5c.max_degree == 2 and c5c.is_connected()


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_complement_round_trip_and_degree_sum(g):
    assert complement(complement(g)) == g
    h = complement(g)
    assert all(g.degrees[v] + h.degrees[v] == g.n - 1 for v in range(g.n))
    assert sum(g.degrees) == 2 * g.m


def test_edit_examples():
    assert sorted(remove_edges(SimpleGraph.complete(4), [(0, 1)]).degrees) == [2, 2, 3, 3]
    assert sorted(add_edges(SimpleGraph.cycle(4), [(0, 2)]).degrees) == [2, 2, 3, 3]
    k3 = SimpleGraph.complete(3)
    assert add_vertex(k3, [0, 1, 2]) == SimpleGraph.complete(4)
    with pytest.raises(ValueError):
        remove_edges(k3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        add_edges(k3, [(0, 1)])


def test_linear_forest_paths():
    f = LinearForest(6, frozenset({(0, 1), (1, 2), (4, 5)}))
    assert f.paths() == [[0, 1, 2], [4, 5]]


def test_bounds():
    assert conjecture_bound(SimpleGraph.complete(5)) == 3
    assert conjecture_bound(SimpleGraph.complete(6)) == 3
    assert la_lower_bound(SimpleGraph.complete(5)) == 3  # e/(n-1) = 10/4
    assert la_lower_bound(SimpleGraph.empty(3)) == 0


def _low_vertices_pairwise_adjacent(adj: list[int], deg: list[int]) -> bool:
    top = max(deg)
    low = [v for v in range(len(deg)) if deg[v] < top]
    return all(adj[u] >> v & 1 for i, u in enumerate(low) for v in low[i + 1 :])


def _majority_of_max_degree(adj: list[int], deg: list[int]) -> bool:
    top = max(deg)
    return 2 * sum(d == top for d in deg) > len(deg)


def test_max_degree_majority_on_all_small_graphs():
    """If the vertices below maximum degree form a clique, more than half have maximum degree."""
    checked = 0
    seven = []
    for h in nx.graph_atlas_g()[1:]:
        g = from_networkx(h)
        adj, deg = list(g.adj_mask), list(g.degrees)
        if _low_vertices_pairwise_adjacent(adj, deg):
            assert _majority_of_max_degree(adj, deg), sorted(g.edges)
            checked += 1
        if g.n == 7:
            seven.append((adj, deg))
    # every 8-vertex graph is a 7-vertex graph plus one vertex
    for adj, deg in seven:
        for nb in range(1 << 7):
            a8 = [adj[v] | ((nb >> v & 1) << 7) for v in range(7)] + [nb]
            d8 = [deg[v] + (nb >> v & 1) for v in range(7)] + [bin(nb).count("1")]
            if _low_vertices_pairwise_adjacent(a8, d8):
                assert _majority_of_max_degree(a8, d8)
                checked += 1
    assert checked > 300
