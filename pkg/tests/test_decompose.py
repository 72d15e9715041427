from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linforest._util import Budget
from linforest.decompose import (
    PipelineParams,
    RouteFailure,
    decompose,
    initial_state,
    la_exact,
    la_regular_expander,
    loop_guard,
    reduce_to_regular,
    theorem14_reduction,
    theorem31_decompose,
)
from linforest.decompose.cases import classify, complete_low_vertices
from linforest.decompose.oracle import OracleBudgetExceeded, greedy_linear_forests
from linforest.decompose.reduction import deficiencies, plan_deficiencies
from linforest.generators import dirac, loop_entry, random_regular, realize_random
from linforest.graph import SimpleGraph, conjecture_bound, la_lower_bound, remove_edges, validate_decomposition
from oracles import brute_la, is_decomposition, random_graph

PARAMS = PipelineParams()


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimpleGraph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def _forests(dec):
    return [f.edges for f in dec.forests]


# -- exact oracle -------------------------------------------------------------------


@pytest.mark.parametrize(
    "g,k",
    [
        (SimpleGraph.path(4), 1),
        (SimpleGraph.cycle(5), 2),
        (SimpleGraph.complete(4), 2),
        (SimpleGraph.complete(5), 3),
        (SimpleGraph.complete(6), 3),
    ],
)
def test_la_exact_examples(g, k):
    found, dec = la_exact(g)
    assert found == k and dec.count == k
    assert is_decomposition(g, _forests(dec))


def test_la_exact_matches_brute_force_colouring():
    rng = random.Random(2)
    checked = 0
    while checked < 60:
        g = random_graph(rng.randint(3, 7), 0.5, rng)
        if g.m > 10:
            continue
        k, dec = la_exact(g)
        assert k == brute_la(g)
        assert is_decomposition(g, _forests(dec))
        checked += 1


def test_la_exact_cap_and_budget():
    with pytest.raises(ValueError, match="capped"):
        la_exact(SimpleGraph.complete(13))
    with pytest.raises(OracleBudgetExceeded) as info:
        la_exact(random_regular(14, 7, 0), Budget(0.001, stride=1), cap=14)
    assert validate_decomposition(random_regular(14, 7, 0), info.value.decomposition)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10))
def test_greedy_always_valid(g):
    dec = greedy_linear_forests(g, restarts=2)
    assert is_decomposition(g, _forests(dec))
    assert dec.count >= la_lower_bound(g)


# -- regular route ----------------------------------------------------------------


@pytest.mark.parametrize("g,count", [(SimpleGraph.complete(5), 3), (SimpleGraph.cycle(6), 2), (SimpleGraph.complete(4), 2)])
def test_regular_route_examples(g, count):
    dec = la_regular_expander(g)
    assert dec.count == count
    assert is_decomposition(g, _forests(dec))


def test_regular_route_random_regular():
    for n, r in [(8, 3), (10, 3), (9, 4), (10, 4), (10, 5), (12, 6)]:
        for seed in range(3):
            g = random_regular(n, r, seed)
            try:
                dec = la_regular_expander(g)
            except RouteFailure:
                continue
            assert dec.count <= (r + 2) // 2
            assert is_decomposition(g, _forests(dec))


def test_regular_route_rejects_non_regular():
    with pytest.raises(ValueError):
        la_regular_expander(SimpleGraph.path(3))
    two_triangles = SimpleGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    with pytest.raises(RouteFailure, match="no Hamilton decomposition"):
        la_regular_expander(two_triangles)


# -- deficiency reduction --------------------------------------------------------


def test_reduce_to_regular_k5_minus_edge():
    g = remove_edges(SimpleGraph.complete(5), [(0, 1)])
    red = reduce_to_regular(g, 4)
    assert deficiencies(g, 4) == [1, 1, 0, 0, 0]
    assert red.plan.forest_count == 1 and red.plan.multigraph.edges == ((0, 1),)
    leaves = {v for v in range(5) if sum(v in e for e in red.forests[0]) == 1}
    assert leaves == {0, 1}
    assert red.residual.degrees == (2, 2, 2, 2, 2)


def test_reduce_to_regular_trivial_and_parity():
    k5 = SimpleGraph.complete(5)
    red = reduce_to_regular(k5, 4)
    assert red.plan.forest_count == 0 and red.residual == k5
    with pytest.raises(ValueError, match="parity"):
        plan_deficiencies(SimpleGraph.path(3), 3)  # df = (2, 1, 2)


def test_deficiency_plan_partitions_h():
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randint(6, 12)
        d = rng.randint(3, n - 1)
        degs = [rng.randint(max(0, d - 3), d) for _ in range(n)]
        if (sum(d - x for x in degs)) % 2 or 2 * max(d - x for x in degs) > sum(d - x for x in degs):
            continue
        try:
            g = realize_random(degs, rng)
        except ValueError:
            continue
        plan = plan_deficiencies(g, d, k_max=2)
        assert plan.multigraph.degrees == tuple(deficiencies(g, d))
        flat = sorted(e for m in plan.matchings for e in m)
        assert flat == sorted(plan.multigraph.edges)
        for m in plan.matchings:
            vs = [v for e in m for v in e]
            assert len(vs) == len(set(vs)) and len(m) <= 2


# -- case routes ------------------------------------------------------------------


def _first(degrees, want, tries=60):
    for seed in range(tries):
        g = realize_random(list(degrees), random.Random(seed))
        c, _ = complete_low_vertices(g)
        if classify(c, PARAMS.eta) == want:
            return g
    raise AssertionError(f"no {want} instance among {tries} seeds")


def test_theorem31_rejects_regular():
    with pytest.raises(ValueError, match="regular"):
        theorem31_decompose(SimpleGraph.complete(5))


def test_theorem31_case3_one_middle_vertex():
    g = _first([7] * 8 + [6] + [4], "case3")
    assert g.n == 10 and sorted(g.degrees).count(6) == 1
    dec, trace = theorem31_decompose(g)
    assert trace.route == "case3"
    assert is_decomposition(g, _forests(dec)) and dec.count <= conjecture_bound(g)


def test_theorem31_case2_gap_two():
    g = _first([9] * 8 + [8] * 2 + [7] * 2, "case2")
    assert g.max_degree - g.min_degree == 2
    dec, trace = theorem31_decompose(g)
    assert trace.route == "case2"
    assert is_decomposition(g, _forests(dec)) and dec.count <= conjecture_bound(g)


def test_theorem31_strips_completion_edges():
    rng = random.Random(4)
    done = 0
    for _ in range(120):
        g = random_graph(rng.randint(9, 12), rng.uniform(0.7, 0.95), rng)
        if g.m == 0 or g.is_regular():
            continue
        try:
            dec, trace = theorem31_decompose(g)
        except RouteFailure:
            continue
        assert is_decomposition(g, _forests(dec)) and dec.count <= conjecture_bound(g)
        done += 1
    assert done > 30


# -- reduction loop ---------------------------------------------------------------


def test_loop_zero_iterations_when_a_case_applies():
    g = _first([7] * 8 + [6] + [4], "case3")
    paths, residual, trace = theorem14_reduction(g)
    assert paths == () and residual == g


def test_loop_iterations_on_loop_entry_instances():
    ran = 0
    for seed in range(30):
        g = loop_entry(11, gap=4, middle=3, seed=seed)
        state = initial_state(g, PARAMS.eta)
        if not loop_guard(state, PARAMS.eta, g.n):
            continue
        try:
            paths, residual, trace = theorem14_reduction(g)
        except RouteFailure:
            continue
        assert 1 <= len(paths) <= 2
        for it, f in zip(trace.iterations, paths):
            walk = it["path"]
            assert (walk[0], walk[-1]) == (it["x"], it["y"])
            assert len(walk) == len(set(walk)) and len(f.paths()) == 1
            assert it["incremental"] == it["recomputed"]
        used = set().union(*(f.edges for f in paths))
        assert residual.edges == g.edges - used
        ran += 1
    assert ran >= 10


# -- dispatcher -------------------------------------------------------------------


def test_decompose_examples():
    dec, trace = decompose(SimpleGraph.complete(5))
    assert dec.count == 3 and trace.route == "regular_route" and trace.status == "success"
    dec, trace = decompose(SimpleGraph.cycle(5))
    assert dec.count == 2 and trace.route == "exact_oracle" and trace.status == "success"
    assert trace.fallbacks and "alpha" in trace.fallbacks[0]["reason"]


def test_decompose_dense_n12():
    seen = 0
    for seed in range(6):
        g = dirac(12, Fraction(1, 6), seed)
        assert g.min_degree >= 7
        dec, trace = decompose(g)
        assert is_decomposition(g, _forests(dec))
        assert trace.status in {"success", "best_effort", "unknown", "failure"}
        if trace.status == "success":
            assert dec.count <= conjecture_bound(g)
            seen += 1
        k, _ = la_exact(g, cap=12)
        assert k <= dec.count
    assert seen >= 1


def test_decompose_strategies_and_empty():
    dec, trace = decompose(SimpleGraph.empty(4))
    assert dec.count == 0 and trace.status == "success"
    dec, trace = decompose(SimpleGraph.complete(6), strategy="oracle")
    assert dec.count == 3 and trace.route == "exact_oracle"
    dec, trace = decompose(SimpleGraph.cycle(5), strategy="pipeline")
    assert is_decomposition(SimpleGraph.cycle(5), _forests(dec))
    with pytest.raises(ValueError):
        decompose(SimpleGraph.complete(3), strategy="magic")


def test_decompose_trace_json_round_trips():
    _, trace = decompose(loop_entry(11, seed=3))
    data = json.loads(json.dumps(trace.to_json()))
    assert data["status"] == trace.status and data["route"] == trace.route


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9))
def test_decompose_never_lies(g):
    dec, trace = decompose(g)
    assert is_decomposition(g, _forests(dec))
    if trace.status == "success":
        assert dec.count <= conjecture_bound(g)
    for fb in trace.fallbacks:
        assert fb["route"] and fb["reason"]
