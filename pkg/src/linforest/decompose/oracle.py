"""Exact linear arboricity by branch and bound, plus a greedy upper bound."""

from __future__ import annotations

import random

from .._util import Budget, SearchBudgetExceeded
from ..graph import (
    Edge,
    LinearForestDecomposition,
    SimpleGraph,
    decomposition_from_edge_sets,
    la_lower_bound,
)

ORACLE_CAP = 12


class OracleBudgetExceeded(SearchBudgetExceeded):
    """The exact search ran out of time; carries the best decomposition found."""

    def __init__(self, message: str, upper: int, decomposition: LinearForestDecomposition):
        super().__init__(message)
        self.upper = upper
        self.decomposition = decomposition


class _Forests:
    """k colour classes with O(1) insert/undo of an edge.

    ``end[c][v]`` is the far end of v's path in colour c (v itself when v is
    isolated there), which makes the cycle test a single comparison.
    """

    def __init__(self, n: int, k: int):
        self.k = k
        self.deg = [[0] * n for _ in range(k)]
        self.end = [list(range(n)) for _ in range(k)]
        self.size = [0] * k

    def fits(self, c: int, u: int, v: int) -> bool:
        deg = self.deg[c]
        return deg[u] < 2 and deg[v] < 2 and self.end[c][u] != v

    def add(self, c: int, u: int, v: int) -> tuple:
        end = self.end[c]
        a, b = end[u], end[v]
        saved = (c, u, v, a, b, end[a], end[b])
        end[a], end[b] = b, a
        self.deg[c][u] += 1
        self.deg[c][v] += 1
        self.size[c] += 1
        return saved

    def undo(self, saved: tuple) -> None:
        c, u, v, a, b, ea, eb = saved
        end = self.end[c]
        end[b] = eb
        end[a] = ea
        self.deg[c][u] -= 1
        self.deg[c][v] -= 1
        self.size[c] -= 1


def greedy_linear_forests(
    g: SimpleGraph, restarts: int = 0, seed: int = 0
) -> LinearForestDecomposition:
    """First-fit colouring of edges into linear forests, best of a few orders."""
    rng = random.Random(seed)
    orders = [sorted(g.edges, key=lambda e: (-(g.degrees[e[0]] + g.degrees[e[1]]), e))]
    for _ in range(restarts):
        es = list(g.edge_list())
        rng.shuffle(es)
        orders.append(es)
    best = None
    for order in orders:
        forests = _Forests(g.n, g.m + 1)
        classes: list[list[Edge]] = []
        for u, v in order:
            for c in range(len(classes) + 1):
                if forests.fits(c, u, v):
                    forests.add(c, u, v)
                    if c == len(classes):
                        classes.append([])
                    classes[c].append((u, v))
                    break
        if best is None or len(classes) < len(best):
            best = classes
    return decomposition_from_edge_sets(g.n, best or [])


def _search(g: SimpleGraph, k: int, budget: Budget) -> list[list[Edge]] | None:
    """A decomposition into k linear forests, or None if none exists."""
    n = g.n
    edges = g.edge_list()
    m = len(edges)
    forests = _Forests(n, k)
    colour = [-1] * m
    remaining = list(g.degrees)  # unassigned edges at each vertex
    incident: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        incident[u].append(i)
        incident[v].append(i)
    if any(d > 2 * k for d in remaining):
        return None
    used = [0]  # number of colours opened so far (symmetry breaking)

    def capacity_ok(v: int) -> bool:
        free = 0
        for c in range(k):
            free += 2 - forests.deg[c][v]
        return free >= remaining[v]

    def rec(left: int) -> bool:
        budget.tick()
        if left == 0:
            return True
        if sum(n - 1 - s for s in forests.size) < left:
            return False
        best_i, best_dom = -1, None
        for i in range(m):
            if colour[i] != -1:
                continue
            u, v = edges[i]
            top = min(k, used[0] + 1)
            dom = [c for c in range(top) if forests.fits(c, u, v)]
            if not dom:
                return False
            if best_dom is None or len(dom) < len(best_dom) or (
                len(dom) == len(best_dom) and remaining[u] + remaining[v] > remaining[edges[best_i][0]] + remaining[edges[best_i][1]]
            ):
                best_i, best_dom = i, dom
                if len(dom) == 1:
                    break
        u, v = edges[best_i]
        for c in best_dom:
            saved = forests.add(c, u, v)
            colour[best_i] = c
            remaining[u] -= 1
            remaining[v] -= 1
            opened = c == used[0]
            if opened:
                used[0] += 1
            if capacity_ok(u) and capacity_ok(v) and rec(left - 1):
                return True
            if opened:
                used[0] -= 1
            remaining[u] += 1
            remaining[v] += 1
            colour[best_i] = -1
            forests.undo(saved)
        return False

    if not rec(m):
        return None
    classes: list[list[Edge]] = [[] for _ in range(k)]
    for i, c in enumerate(colour):
        classes[c].append(edges[i])
    return [cl for cl in classes if cl]


def la_exact(
    g: SimpleGraph, budget: Budget | float | None = None, cap: int = ORACLE_CAP
) -> tuple[int, LinearForestDecomposition]:
    """Exact linear arboricity and a witness decomposition.

    Tries k from the lower bound max(ceil(D/2), ceil(e/(n-1))) upward; each
    k is a complete search, so the first success is the minimum.
    """
    if g.n > cap and budget is None:
        raise ValueError(f"exact oracle is capped at n = {cap} without a budget; got n = {g.n}")
    if not isinstance(budget, Budget):
        budget = Budget.from_env() if budget is None else Budget(budget)
    upper = greedy_linear_forests(g, restarts=4)
    if g.m == 0:
        return 0, upper
    for k in range(la_lower_bound(g), upper.count):
        try:
            found = _search(g, k, budget)
        except SearchBudgetExceeded:
            raise OracleBudgetExceeded(
                f"budget exhausted while testing k = {k}; best known {upper.count}", upper.count, upper
            ) from None
        if found is not None:
            return k, decomposition_from_edge_sets(g.n, found)
    return upper.count, upper
