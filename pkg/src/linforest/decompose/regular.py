"""Regular graphs: Hamilton decomposition turned into ceil((r+1)/2) linear forests."""

from __future__ import annotations

from typing import Iterator, Sequence

from .._util import Budget
from ..graph import Edge, LinearForestDecomposition, SimpleGraph, check_linear_forest, decomposition_from_edge_sets, norm
from ..hamilton import DECOMPOSITION_CAP, hamilton_decomposition
from ..matching import max_matching
from .common import RouteFailure, budget_of, cycle_edges

ROUTE = "regular_route"
MATCHING_TRIES = 64


def _pick_one_per_cycle(cycles: Sequence[Sequence[Edge]], base: set[Edge] = frozenset()) -> list[Edge] | None:
    """One edge from each cycle so that the picks plus ``base`` form a linear forest
    and the picks are pairwise disjoint."""
    picks: list[Edge] = []
    used: set[int] = set()

    def rec(i: int) -> bool:
        if i == len(cycles):
            return True
        for e in cycles[i]:
            if e[0] in used or e[1] in used:
                continue
            if base and check_linear_forest(sorted(set(base) | set(picks) | {e})) is not None:
                continue
            picks.append(e)
            used.update(e)
            if rec(i + 1):
                return True
            picks.pop()
            used.difference_update(e)
        return False

    return picks if rec(0) else None


def perfect_matchings(g: SimpleGraph, budget: Budget) -> Iterator[frozenset]:
    """The blossom matching first (if perfect), then all perfect matchings by branching."""
    first = max_matching(g)
    if 2 * first.size == g.n:
        yield first.edges
    chosen: list[Edge] = []

    def rec(free: int) -> Iterator[frozenset]:
        budget.tick()
        if not free:
            yield frozenset(chosen)
            return
        v = (free & -free).bit_length() - 1
        rest = free & ~(1 << v)
        cand = g.adj_mask[v] & rest
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            chosen.append(norm(v, w))
            yield from rec(rest & ~low)
            chosen.pop()

    if g.n % 2 == 0:
        for m in rec((1 << g.n) - 1):
            if m != first.edges:
                yield m


def _hd_forests(cycles: list[list[int]]) -> tuple[list[set[Edge]], list[list[Edge]]]:
    es = [cycle_edges(c) for c in cycles]
    return [set(x) for x in es], es


def la_regular_expander(
    g: SimpleGraph, cap: int = DECOMPOSITION_CAP, budget: Budget | float | None = None
) -> LinearForestDecomposition:
    """At most ceil((r+1)/2) linear forests for an r-regular graph.

    Even r: Hamilton cycles, each opened by deleting one edge, the deleted
    edges forming a matching. Odd r: a perfect matching M, a Hamilton
    decomposition of the rest, and one deleted edge per cycle joined to M
    without closing a cycle.
    """
    if not g.is_regular():
        raise ValueError("la_regular_expander needs a regular graph")
    budget = budget_of(budget)
    r = g.max_degree if g.n else 0
    if r == 0:
        return LinearForestDecomposition(())
    if r % 2 == 0:
        cycles = _decompose(g, cap, budget)
        sets, es = _hd_forests(cycles)
        picks = _pick_one_per_cycle(es)
        if picks is None:
            raise RouteFailure(ROUTE, "no disjoint choice of one edge per Hamilton cycle")
        forests = [s - {p} for s, p in zip(sets, picks)] + [set(picks)]
        return decomposition_from_edge_sets(g.n, forests)
    if g.n % 2:
        raise RouteFailure(ROUTE, "odd degree with odd order is impossible")
    tries = 0
    for m in perfect_matchings(g, budget):
        tries += 1
        if tries > MATCHING_TRIES:
            break
        rest = SimpleGraph(g.n, frozenset(g.edges - m))
        if r == 1:
            return decomposition_from_edge_sets(g.n, [m])
        try:
            cycles = _decompose(rest, cap, budget)
        except RouteFailure:
            continue
        sets, es = _hd_forests(cycles)
        picks = _pick_one_per_cycle(es, set(m))
        if picks is None:
            continue
        forests = [s - {p} for s, p in zip(sets, picks)] + [set(m) | set(picks)]
        return decomposition_from_edge_sets(g.n, forests)
    raise RouteFailure(ROUTE, f"no perfect matching among the first {min(tries, MATCHING_TRIES)} leaves a usable Hamilton decomposition")


def _decompose(g: SimpleGraph, cap: int, budget: Budget) -> list[list[int]]:
    if g.n > cap:
        raise RouteFailure(ROUTE, f"Hamilton decomposition search capped at n = {cap}; got n = {g.n}")
    cycles = hamilton_decomposition(g, cap=cap, budget=budget)
    if cycles is None:
        raise RouteFailure(ROUTE, "graph has no Hamilton decomposition")
    return cycles


def hamilton_decompose_or_fail(g: SimpleGraph, cap: int, budget: Budget, route: str) -> list[list[int]]:
    try:
        return _decompose(g, cap, budget)
    except RouteFailure as exc:
        raise RouteFailure(route, exc.reason) from None


__all__ = ["la_regular_expander", "perfect_matchings", "hamilton_decompose_or_fail"]
