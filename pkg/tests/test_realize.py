from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linforest.graph import SimpleGraph
from linforest.realize import (
    DegreeSequence,
    InfeasibleSequence,
    case1_supergraph,
    erdos_gallai_feasible,
    hakimi_multigraph,
    havel_hakimi,
    near_regular_simple,
    supergraph_size,
)
from oracles import all_degree_sequences, erdos_gallai, random_graph


@lru_cache(maxsize=None)
def _multigraph_exists(degs: tuple) -> bool:
    """Pair stubs one at a time; independent of the parity/dominance criterion."""
    degs = tuple(sorted((d for d in degs if d), reverse=True))
    if not degs:
        return True
    for j in range(1, len(degs)):
        nxt = list(degs)
        nxt[0] -= 1
        nxt[j] -= 1
        if _multigraph_exists(tuple(nxt)):
            return True
    return False


def test_degree_sequence_type():
    s = DegreeSequence.of([1, 3, 2])
    assert s.values == (3, 2, 1) and s.total == 6 and s.even
    with pytest.raises(ValueError):
        DegreeSequence((1, 2))
    with pytest.raises(ValueError):
        DegreeSequence((2, -1))


def test_hakimi_examples():
    h = hakimi_multigraph([2, 1, 1])
    assert h.degrees == (2, 1, 1)
    h = hakimi_multigraph([3, 1, 1, 1])
    assert h.degrees == (3, 1, 1, 1) and h.m == 3
    with pytest.raises(InfeasibleSequence, match="dominance"):
        hakimi_multigraph([4, 1, 1])
    with pytest.raises(InfeasibleSequence, match="parity"):
        hakimi_multigraph([3, 2, 2])


def test_hakimi_matches_stub_pairing_oracle():
    for n in range(1, 6):
        for seq in product(range(5), repeat=n):
            exists = _multigraph_exists(seq)
            if exists:
                h = hakimi_multigraph(seq)
                assert h.degrees == seq
                assert all(u != v for u, v in h.edges)
            else:
                with pytest.raises(InfeasibleSequence):
                    hakimi_multigraph(seq)


def test_erdos_gallai_examples():
    assert erdos_gallai_feasible([3, 3, 2, 2, 2])
    assert not erdos_gallai_feasible([3, 3, 3])
    assert erdos_gallai_feasible([2, 2, 2])


@pytest.mark.parametrize("n", range(1, 7))
def test_erdos_gallai_against_every_small_graph(n):
    graphic = all_degree_sequences(n)
    for seq in product(range(n + 1), repeat=n):
        if list(seq) != sorted(seq, reverse=True):
            continue
        assert erdos_gallai_feasible(seq) == (seq in graphic)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 11), min_size=1, max_size=12))
def test_havel_hakimi_against_erdos_gallai(seq):
    if erdos_gallai(seq):
        g = havel_hakimi(seq)
        assert list(g.degrees) == seq
    else:
        with pytest.raises(InfeasibleSequence):
            havel_hakimi(seq)


def test_near_regular_examples():
    assert near_regular_simple(4, 3, 4) == SimpleGraph.complete(4)
    g = near_regular_simple(5, 3, 2)
    assert sorted(g.degrees, reverse=True) == [3, 3, 2, 2, 2]
    with pytest.raises(ValueError, match="parity"):
        near_regular_simple(4, 3, 1)


def test_near_regular_all_small_parameters():
    for n in range(3, 13):
        for d in range(2, n):
            for t in range(1, n + 1):
                seq = [d] * t + [d - 1] * (n - t)
                if sum(seq) % 2:
                    continue
                assert erdos_gallai(seq)
                assert list(near_regular_simple(n, d, t).degrees) == seq


def test_case1_supergraph_c8():
    emb = case1_supergraph(SimpleGraph.cycle(8), 4)
    assert supergraph_size(8, 4, 16) == 4
    assert len(emb.x_set) == 4 and emb.d == 1 and emb.ell == 4
    assert emb.host.n == 12 and len(emb.def_edges) == 16
    assert emb.r_graph.m == 0
    assert all(d == 4 for d in emb.host.degrees)
    sub, _ = emb.host.induced(range(8))
    assert sub == SimpleGraph.cycle(8)
    assert (len(emb.x_set) - 8) % 2 == 0


def test_case1_supergraph_rejects_regular_input():
    with pytest.raises(ValueError, match="regime"):
        case1_supergraph(SimpleGraph.cycle(8), 2)


def test_case1_supergraph_random_instances():
    rng = random.Random(21)
    built = 0
    for _ in range(200):
        n = rng.randint(6, 14)
        g = random_graph(n, rng.uniform(0.3, 0.8), rng)
        top = g.max_degree + (g.max_degree % 2)
        try:
            emb = case1_supergraph(g, top)
        except ValueError:
            continue
        built += 1
        assert all(d == top for d in emb.host.degrees)
        sub, _ = emb.host.induced(range(n))
        assert sub == g
        assert (len(emb.x_set) - n) % 2 == 0
        assert len(emb.x_set) >= (top + 4 + 1) // 2
    assert built > 20
