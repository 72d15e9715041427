"""Peel linear forests whose leaves follow a deficiency multigraph, evening out degrees."""

from __future__ import annotations

from dataclasses import dataclass

from .._util import Budget
from ..graph import Edge, MultiGraph, SimpleGraph, remove_edges
from ..hamilton import k_linkage
from ..realize import InfeasibleSequence, hakimi_multigraph
from .common import RouteFailure, budget_of, path_edges

ROUTE = "reduce_to_regular"
DEFAULT_K_MAX = 2


def deficiencies(g: SimpleGraph, d: int) -> list[int]:
    """df_G(v, d) = max(d - d_G(v), 0) for every vertex."""
    return [max(d - x, 0) for x in g.degrees]


@dataclass(frozen=True)
class DeficiencyPlan:
    target_d: int
    multigraph: MultiGraph
    matchings: tuple
    k_max: int

    @property
    def forest_count(self) -> int:
        return len(self.matchings)

    def to_json(self) -> dict:
        return {
            "d": self.target_d,
            "H": [list(e) for e in self.multigraph.edges],
            "matchings": [[list(e) for e in m] for m in self.matchings],
            "forest_count": self.forest_count,
        }


def greedy_edge_colouring(h: MultiGraph) -> list[list[Edge]]:
    """Proper colouring of a loopless multigraph with at most 2*Delta(H) - 1 colours."""
    at: list[set[int]] = [set() for _ in range(h.n)]
    classes: list[list[Edge]] = []
    for u, v in h.edges:
        c = 0
        while c in at[u] or c in at[v]:
            c += 1
        if c == len(classes):
            classes.append([])
        classes[c].append((u, v))
        at[u].add(c)
        at[v].add(c)
    return classes


def plan_deficiencies(g: SimpleGraph, d: int, k_max: int = DEFAULT_K_MAX) -> DeficiencyPlan:
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    df = deficiencies(g, d)
    try:
        h = hakimi_multigraph(df)
    except InfeasibleSequence as exc:
        raise ValueError(f"deficiency sequence is not realizable: {exc}") from exc
    classes = greedy_edge_colouring(h)
    if h.m and len(classes) > max(2 * h.max_degree - 1, 1):
        raise AssertionError("edge colouring used more than 2*Delta(H) - 1 colours")
    matchings = []
    for cl in classes:
        for s in range(0, len(cl), k_max):
            matchings.append(tuple(cl[s : s + k_max]))
    return DeficiencyPlan(d, h, tuple(matchings), k_max)


@dataclass(frozen=True)
class Reduction:
    plan: DeficiencyPlan
    forests: tuple
    residual: SimpleGraph


def reduce_to_regular(
    g: SimpleGraph, d: int, k_max: int = DEFAULT_K_MAX, budget: Budget | float | None = None
) -> Reduction:
    """Remove one spanning linear forest per matching M_i of the deficiency multigraph.

    The forest's leaves are exactly V(M_i), so afterwards every vertex v has
    degree d_G(v) - 2*ell + df_G(v, d).
    """
    plan = plan_deficiencies(g, d, k_max)
    budget = budget_of(budget)
    current = g
    forests: list[frozenset] = []
    for i, m in enumerate(plan.matchings):
        paths = k_linkage(current, list(m), budget)
        if paths is None:
            raise RouteFailure(
                ROUTE, f"no spanning linear forest with leaves V(M_{i + 1}) after {i} of {plan.forest_count} forests"
            )
        es = frozenset(e for p in paths for e in path_edges(p))
        forests.append(es)
        current = remove_edges(current, es)
    ell = plan.forest_count
    df = deficiencies(g, d)
    for v in range(g.n):
        if current.degrees[v] != g.degrees[v] - 2 * ell + df[v]:
            raise AssertionError(f"degree identity fails at vertex {v}")
    return Reduction(plan, tuple(forests), current)


__all__ = ["DeficiencyPlan", "Reduction", "deficiencies", "plan_deficiencies", "reduce_to_regular", "greedy_edge_colouring"]
