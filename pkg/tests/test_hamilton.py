from __future__ import annotations

import random
from itertools import permutations

import pytest

from linforest._util import Budget, SearchBudgetExceeded
from linforest.generators import random_regular
from linforest.graph import SimpleGraph, norm
from linforest.hamilton import (
    Layout,
    check_paths_cover,
    edge_disjoint_spanning_configs,
    hamilton_cycle,
    hamilton_decomposition,
    hamilton_path,
    k_linkage,
    spanning_configuration,
    spanning_configurations,
)
from oracles import hamilton_paths_by_permutation, linkages_by_enumeration, petersen, random_graph, star


def _is_ham_path(g, p, x, y):
    return p[0] == x and p[-1] == y and sorted(p) == list(range(g.n)) and all(
        g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1)
    )


def _cycle_edge_set(c):
    return {norm(c[i], c[(i + 1) % len(c)]) for i in range(len(c))}


def _ham_cycles_by_permutation(g):
    out = []
    for perm in permutations(range(1, g.n)):
        if perm[0] > perm[-1]:
            continue
        c = (0, *perm)
        if all(g.has_edge(c[i], c[(i + 1) % g.n]) for i in range(g.n)):
            out.append(c)
    return out


def test_hamilton_path_examples():
    p = hamilton_path(SimpleGraph.complete(4), 0, 3)
    assert _is_ham_path(SimpleGraph.complete(4), p, 0, 3)
    assert hamilton_path(star(3), 1, 2) is None
    with pytest.raises(ValueError):
        hamilton_path(SimpleGraph.complete(3), 1, 1)


def test_hamilton_path_petersen_against_permutations():
    g = petersen()
    for x, y in [(0, 1), (0, 5), (5, 7)]:
        found = hamilton_path(g, x, y)
        truth = hamilton_paths_by_permutation(g, x, y)
        assert (found is not None) == bool(truth)
        if found:
            assert _is_ham_path(g, found, x, y)


def test_hamilton_path_random_against_permutations():
    rng = random.Random(13)
    for _ in range(120):
        n = rng.randint(2, 8)
        g = random_graph(n, rng.choice([0.4, 0.6, 0.8]), rng)
        x, y = rng.sample(range(n), 2)
        found = hamilton_path(g, x, y)
        assert (found is not None) == bool(hamilton_paths_by_permutation(g, x, y))
        if found:
            assert _is_ham_path(g, found, x, y)


def test_hamilton_cycle_random_against_permutations():
    rng = random.Random(17)
    for _ in range(80):
        n = rng.randint(3, 8)
        g = random_graph(n, rng.choice([0.4, 0.6, 0.8]), rng)
        c = hamilton_cycle(g)
        assert (c is not None) == bool(_ham_cycles_by_permutation(g))
        if c:
            assert sorted(c) == list(range(n)) and _cycle_edge_set(c) <= g.edges


@pytest.mark.parametrize("n,cycles", [(5, 2), (7, 3)])
def test_hamilton_decomposition_complete(n, cycles):
    g = SimpleGraph.complete(n)
    hd = hamilton_decomposition(g)
    assert len(hd) == cycles
    sets = [_cycle_edge_set(c) for c in hd]
    assert all(sorted(c) == list(range(n)) for c in hd)
    assert set().union(*sets) == g.edges and sum(map(len, sets)) == g.m


def test_hamilton_decomposition_cycle_and_errors():
    assert [_cycle_edge_set(c) for c in hamilton_decomposition(SimpleGraph.cycle(6))] == [SimpleGraph.cycle(6).edges]
    with pytest.raises(ValueError, match="even"):
        hamilton_decomposition(SimpleGraph.complete(4))
    with pytest.raises(ValueError, match="regular"):
        hamilton_decomposition(SimpleGraph.path(4))


def test_hamilton_decomposition_against_cycle_enumeration():
    """A 4-regular graph decomposes iff some Hamilton cycle leaves a Hamilton cycle."""
    agree = {True: 0, False: 0}
    for n in range(6, 10):
        for seed in range(8):
            g = random_regular(n, 4, seed)
            cycles = _ham_cycles_by_permutation(g)
            truth = any(
                SimpleGraph(n, frozenset(g.edges - _cycle_edge_set(c))).is_connected() for c in cycles
            )
            hd = hamilton_decomposition(g)
            assert (hd is not None) == truth
            agree[truth] += 1
            if hd:
                assert set().union(*map(_cycle_edge_set, hd)) == g.edges
    assert agree[True] > 0


def test_budget_exhaustion_is_not_a_no():
    g = random_regular(16, 6, 1)
    with pytest.raises(SearchBudgetExceeded):
        hamilton_decomposition(g, budget=Budget(0.001, stride=1))


def test_k_linkage_examples():
    k6 = SimpleGraph.complete(6)
    paths = k_linkage(k6, [(0, 1), (2, 3)])
    assert check_paths_cover(k6, paths)
    assert [(p[0], p[-1]) for p in paths] == [(0, 1), (2, 3)]
    assert k_linkage(SimpleGraph.path(4), [(0, 3)]) == [[0, 1, 2, 3]]
    c6 = SimpleGraph.cycle(6)
    assert k_linkage(c6, [(0, 1), (3, 4)]) is None
    assert linkages_by_enumeration(c6, [(0, 1), (3, 4)]) == []


def test_k_linkage_against_enumeration():
    rng = random.Random(29)
    for _ in range(80):
        n = rng.randint(4, 8)
        g = random_graph(n, rng.choice([0.5, 0.7]), rng)
        ends = rng.sample(range(n), 4)
        pairs = [(ends[0], ends[1]), (ends[2], ends[3])]
        found = k_linkage(g, pairs)
        assert (found is not None) == bool(linkages_by_enumeration(g, pairs))
        if found:
            assert check_paths_cover(g, found)


def test_k_linkage_rejects_shared_terminals():
    with pytest.raises(ValueError):
        k_linkage(SimpleGraph.complete(5), [(0, 1), (1, 2)])


def test_layout_validation():
    with pytest.raises(ValueError, match="non-forced"):
        Layout(((0, 1),), forced=((0, 1),))
    with pytest.raises(ValueError, match="vertex-disjoint"):
        Layout(((0, 1), (1, 2)))
    with pytest.raises(ValueError, match="forced edges"):
        Layout(((0, 1, 2),), forced=((0, 2),))
    lay = Layout(((0, 1, 2, 0),), forced=((2, 0),))
    assert lay.edges() == [(0, 1), (1, 2), (2, 0)] and lay.forced_flags() == [False, False, True]
    assert Layout.from_json(lay.to_json()) == lay


def test_spanning_configuration_examples():
    k5 = SimpleGraph.complete(5)
    conf = spanning_configuration(k5, Layout(((0, 1),)))
    assert _is_ham_path(k5, list(conf.paths[0]), 0, 1)
    k6 = SimpleGraph.complete(6)
    conf = spanning_configuration(k6, Layout(((0, 1, 2, 0),), forced=((2, 0),)))
    assert conf.problems(k6) == []
    assert conf.paths[2] == (2, 0)
    assert set(conf.internal_vertices()) == {3, 4, 5}
    small = SimpleGraph.from_edges(3, [(0, 1), (1, 2)])
    assert spanning_configuration(small, Layout(((0, 1, 2, 0),), forced=((0, 1), (1, 2)))) is None


def test_spanning_configurations_all_valid():
    g = random_graph(8, 0.7, random.Random(3))
    lay = Layout(((0, 1), (2, 3, 4)), forced=((3, 4),), isolated=(5,))
    count = 0
    for conf in spanning_configurations(g, lay):
        assert conf.problems(g) == []
        count += 1
        if count > 50:
            break


def test_edge_disjoint_configs_examples():
    k7 = SimpleGraph.complete(7)
    out = edge_disjoint_spanning_configs(k7, [Layout(((0, 1),)), Layout(((2, 3),))])
    assert out.ok
    a, b = (set(c.host_edges()) for c in out.configs)
    assert not a & b and len(a) == len(b) == 6
    assert out.residual.m == k7.m - 12
    single = edge_disjoint_spanning_configs(k7, [Layout(((0, 1),))])
    assert single.ok and single.configs[0].problems(k7) == []
    c5 = SimpleGraph.cycle(5)
    fail = edge_disjoint_spanning_configs(c5, [Layout(((0, 1),)), Layout(((2, 3),))])
    assert not fail.ok and "host edges" in fail.reason
