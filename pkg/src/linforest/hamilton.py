"""Exact backtracking for Hamilton paths, cycles, decompositions, linkages and layouts.

Every solver answers ``None`` only after exhausting the search space; running
out of time raises :class:`SearchBudgetExceeded` instead.

The common engine routes an ordered list of segments ``(u, v)`` as internally
disjoint paths whose interior vertices are exactly a prescribed pool.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from ._util import Budget, SearchBudgetExceeded, bits, mask_of
from .graph import Edge, SimpleGraph, norm

__all__ = [
    "SearchBudgetExceeded",
    "Layout",
    "SpanningConfiguration",
    "ConfigurationOutcome",
    "route_segments",
    "hamilton_path",
    "hamilton_cycle",
    "hamilton_cycles_through",
    "hamilton_decomposition",
    "k_linkage",
    "spanning_configuration",
    "spanning_configurations",
    "edge_disjoint_spanning_configs",
    "read_layout",
]

DECOMPOSITION_CAP = 16
MEMO_CAP = 2_000_000


def _budget(budget: Budget | float | None) -> Budget:
    if isinstance(budget, Budget):
        return budget
    if budget is None:
        return Budget.from_env()
    return Budget(budget)


def route_segments(
    adj: Sequence[int],
    segments: Sequence[tuple[int, int]],
    pool: int,
    budget: Budget | float | None = None,
    allow_direct: bool = True,
) -> Iterator[list[list[int]]]:
    """Yield every way to realize ``segments`` as paths through ``pool``.

    ``adj`` holds neighbourhood bitmasks. Each segment becomes a path from u
    to v whose interior lies in ``pool``; every pool vertex is used exactly
    once. A segment may be the bare edge uv when ``allow_direct`` holds, but
    one host edge serves at most one segment.
    """
    budget = _budget(budget)
    k = len(segments)
    if k == 0:
        if pool == 0:
            yield []
        return
    tail = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        u, v = segments[i]
        tail[i] = tail[i + 1] | (1 << u) | (1 << v)
    failed: set = set()
    used_direct: list[Edge] = []
    route: list[list[int]] = [[] for _ in range(k)]

    def feasible(i: int, cur: int, pool: int) -> bool:
        live = pool | (1 << cur) | (1 << segments[i][1]) | tail[i + 1]
        for w in bits(pool):
            if (adj[w] & live & ~(1 << w)).bit_count() < 2:
                return False
        reached = 0
        frontier = (1 << cur) | (1 << segments[i][1]) | tail[i + 1]
        while frontier:
            nxt = 0
            for x in bits(frontier):
                nxt |= adj[x]
            frontier = nxt & pool & ~reached
            reached |= frontier
        return reached == pool

    def rec(i: int, cur: int, pool: int):
        budget.tick()
        key = (i, cur, pool, tuple(used_direct))
        if key in failed:
            return
        found = False
        u, v = segments[i]
        if pool and feasible(i, cur, pool):
            cands = sorted(bits(adj[cur] & pool), key=lambda w: (adj[w] & pool).bit_count())
            for w in cands:
                route[i].append(w)
                for sol in rec(i, w, pool & ~(1 << w)):
                    found = True
                    yield sol
                route[i].pop()
        if (adj[cur] >> v) & 1 and (i < k - 1 or not pool):
            direct = cur == u
            e = norm(u, v)
            if not direct or (allow_direct and e not in used_direct):
                if direct:
                    used_direct.append(e)
                route[i].append(v)
                if i == k - 1:
                    found = True
                    yield [list(r) for r in route]
                else:
                    nu = segments[i + 1][0]
                    route[i + 1].append(nu)
                    for sol in rec(i + 1, nu, pool):
                        found = True
                        yield sol
                    route[i + 1].pop()
                route[i].pop()
                if direct:
                    used_direct.pop()
        if not found and len(failed) < MEMO_CAP:
            failed.add(key)

    route[0].append(segments[0][0])
    yield from rec(0, segments[0][0], pool)


def _full_mask(n: int) -> int:
    return (1 << n) - 1


def hamilton_path(g: SimpleGraph, x: int, y: int, budget: Budget | float | None = None) -> list[int] | None:
    """A Hamilton path from x to y, or None if there is none."""
    if x == y:
        raise ValueError("endpoints must differ")
    pool = _full_mask(g.n) & ~(1 << x) & ~(1 << y)
    for sol in route_segments(g.adj_mask, [(x, y)], pool, budget, allow_direct=g.n == 2):
        return sol[0]
    return None


def hamilton_cycles_through(
    g: SimpleGraph | Sequence[int], u: int, v: int, budget: Budget | float | None = None
) -> Iterator[list[int]]:
    """Hamilton cycles containing the edge uv, as vertex lists starting at u and ending at v."""
    adj = list(g.adj_mask) if isinstance(g, SimpleGraph) else list(g)
    n = len(adj)
    if not (adj[u] >> v) & 1 or n < 3:
        return
    pool = _full_mask(n) & ~(1 << u) & ~(1 << v)
    for sol in route_segments(adj, [(u, v)], pool, budget, allow_direct=False):
        yield sol[0]


def hamilton_cycle(g: SimpleGraph, budget: Budget | float | None = None) -> list[int] | None:
    """A Hamilton cycle as a vertex list (closing edge implied), or None."""
    if g.n < 3:
        return None
    budget = _budget(budget)
    adj = list(g.adj_mask)
    for u in sorted(g.adj[0]):
        for cyc in hamilton_cycles_through(adj, 0, u, budget):
            return cyc
        # no Hamilton cycle uses 0u, so the edge can be dropped
        adj[0] &= ~(1 << u)
        adj[u] &= ~1
    return None


def _cycle_edges(cyc: Sequence[int]) -> list[Edge]:
    return [norm(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]


def _single_cycle(adj: list[int]) -> list[int] | None:
    n = len(adj)
    walk, prev, cur = [0], -1, 0
    while True:
        nxt = [w for w in bits(adj[cur]) if w != prev]
        step = nxt[0]
        if step == 0:
            break
        walk.append(step)
        prev, cur = cur, step
        if len(walk) > n:
            return None
    return walk if len(walk) == n else None


def _connected(adj: list[int]) -> bool:
    reached = frontier = 1
    while frontier:
        nxt = 0
        for x in bits(frontier):
            nxt |= adj[x]
        frontier = nxt & ~reached
        reached |= frontier
    return reached == _full_mask(len(adj))


def hamilton_decomposition(
    g: SimpleGraph, cap: int = DECOMPOSITION_CAP, budget: Budget | float | None = None
) -> list[list[int]] | None:
    """Partition E(g) into r/2 Hamilton cycles, or None if impossible."""
    if not g.is_regular():
        raise ValueError("Hamilton decomposition needs a regular graph")
    r = g.max_degree if g.n else 0
    if r % 2:
        raise ValueError(f"Hamilton decomposition needs even degree; got r = {r}")
    if g.n > cap:
        raise ValueError(f"Hamilton decomposition search is capped at n = {cap}; got n = {g.n}")
    if r == 0:
        return []
    budget = _budget(budget)
    dead: set[tuple[int, ...]] = set()

    def rec(adj: list[int], deg: int) -> list[list[int]] | None:
        budget.tick()
        key = tuple(adj)
        if key in dead or not _connected(adj):
            return None
        if deg == 2:
            cyc = _single_cycle(adj)
            if cyc is None:
                dead.add(key)
            return None if cyc is None else [cyc]
        first = (adj[0] & -adj[0]).bit_length() - 1
        for cyc in hamilton_cycles_through(adj, 0, first, budget):
            rest = list(adj)
            for a, b in _cycle_edges(cyc):
                rest[a] &= ~(1 << b)
                rest[b] &= ~(1 << a)
            found = rec(rest, deg - 2)
            if found is not None:
                return [cyc] + found
        dead.add(key)
        return None

    return rec(list(g.adj_mask), r)


def k_linkage(
    g: SimpleGraph, pairs: Sequence[tuple[int, int]], budget: Budget | float | None = None
) -> list[list[int]] | None:
    """Vertex-disjoint paths joining each pair and jointly covering V(g), or None."""
    if not pairs:
        raise ValueError("need at least one pair")
    ends = [x for p in pairs for x in p]
    if len(set(ends)) != len(ends):
        raise ValueError("terminal vertices must be distinct")
    if any(not 0 <= x < g.n for x in ends):
        raise ValueError("terminal out of range")
    pool = _full_mask(g.n) & ~mask_of(ends)
    for sol in route_segments(g.adj_mask, list(pairs), pool, budget):
        return sol
    return None


# -- layouts --------------------------------------------------------------------------


@dataclass(frozen=True)
class Layout:
    """A path system L (closed walks allowed as cycles) plus forced edges F."""

    paths: tuple
    forced: tuple = ()
    isolated: tuple = ()

    def __post_init__(self):
        paths = tuple(tuple(int(v) for v in p) for p in self.paths)
        forced = tuple(sorted(norm(int(a), int(b)) for a, b in self.forced))
        isolated = tuple(sorted(int(v) for v in self.isolated))
        object.__setattr__(self, "paths", paths)
        object.__setattr__(self, "forced", forced)
        object.__setattr__(self, "isolated", isolated)
        seen: set[int] = set()
        for p in paths:
            if len(p) < 2:
                raise ValueError("layout paths need at least two vertices")
            closed = len(p) > 3 and p[0] == p[-1]
            body = p[:-1] if closed else p
            if len(set(body)) != len(body):
                raise ValueError(f"layout path {list(p)} repeats a vertex")
            if seen & set(body):
                raise ValueError("layout paths must be vertex-disjoint")
            seen |= set(body)
        if seen & set(isolated) or len(set(isolated)) != len(isolated):
            raise ValueError("isolated vertices must be distinct and off the paths")
        have = Counter(norm(a, b) for a, b in self.edges())
        need = Counter(forced)
        if any(need[e] > have[e] for e in need):
            raise ValueError("forced edges must be edges of L")
        if sum(have.values()) <= len(forced):
            raise ValueError("a layout needs at least one non-forced edge")

    def edges(self) -> list[tuple[int, int]]:
        """Layout edges in path order, oriented along each path."""
        return [(p[i], p[i + 1]) for p in self.paths for i in range(len(p) - 1)]

    def forced_flags(self) -> list[bool]:
        budget = Counter(self.forced)
        flags = []
        for a, b in self.edges():
            e = norm(a, b)
            flags.append(budget[e] > 0)
            if budget[e] > 0:
                budget[e] -= 1
        return flags

    def vertices(self) -> set[int]:
        return {v for p in self.paths for v in p} | set(self.isolated)

    def to_json(self) -> dict:
        return {
            "paths": [list(p) for p in self.paths],
            "isolated": list(self.isolated),
            "forced": [list(e) for e in self.forced],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Layout":
        return cls(tuple(data.get("paths", ())), tuple(data.get("forced", ())), tuple(data.get("isolated", ())))


def read_layout(path: str | Path) -> Layout:
    return Layout.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class SpanningConfiguration:
    """One path per layout edge, aligned with ``layout.edges()``."""

    layout: Layout
    paths: tuple

    def host_edges(self) -> list[Edge]:
        out = []
        for p, forced in zip(self.paths, self.layout.forced_flags()):
            if not forced:
                out += [norm(p[i], p[i + 1]) for i in range(len(p) - 1)]
        return out

    def internal_vertices(self) -> list[int]:
        return [v for p in self.paths for v in p[1:-1]]

    def problems(self, g: SimpleGraph) -> list[str]:
        """Violations of the configuration invariants against host g (empty if valid)."""
        out = []
        for (a, b), p, forced in zip(self.layout.edges(), self.paths, self.layout.forced_flags()):
            if (p[0], p[-1]) != (a, b):
                out.append(f"path {list(p)} does not join {a} and {b}")
            if forced and len(p) != 2:
                out.append(f"forced edge {a}{b} was subdivided")
        host = self.host_edges()
        if any(e not in g.edges for e in host):
            out.append("uses a non-edge of the host")
        if len(set(host)) != len(host):
            out.append("uses a host edge twice")
        inner = self.internal_vertices()
        if len(set(inner)) != len(inner):
            out.append("an internal vertex is shared")
        if set(inner) != set(range(g.n)) - self.layout.vertices():
            out.append("internal vertices differ from V minus V(L)")
        return out


def _check_layout_host(g: SimpleGraph, layout: Layout) -> None:
    if any(not 0 <= v < g.n for v in layout.vertices()):
        raise ValueError("layout vertex outside the host")


def spanning_configurations(
    g: SimpleGraph | Sequence[int], layout: Layout, budget: Budget | float | None = None
) -> Iterator[SpanningConfiguration]:
    adj = g.adj_mask if isinstance(g, SimpleGraph) else g
    n = len(adj)
    if isinstance(g, SimpleGraph):
        _check_layout_host(g, layout)
    edges = layout.edges()
    flags = layout.forced_flags()
    segs = [e for e, f in zip(edges, flags) if not f]
    pool = _full_mask(n) & ~mask_of(layout.vertices())
    for sol in route_segments(adj, segs, pool, budget):
        it = iter(sol)
        paths = tuple(tuple(e) if f else tuple(next(it)) for e, f in zip(edges, flags))
        yield SpanningConfiguration(layout, paths)


def spanning_configuration(
    g: SimpleGraph, layout: Layout, budget: Budget | float | None = None
) -> SpanningConfiguration | None:
    for conf in spanning_configurations(g, layout, budget):
        return conf
    return None


@dataclass(frozen=True)
class ConfigurationOutcome:
    ok: bool
    configs: tuple = ()
    residual: SimpleGraph | None = None
    stuck_layout: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def edge_disjoint_spanning_configs(
    g: SimpleGraph, layouts: Sequence[Layout], budget: Budget | float | None = None
) -> ConfigurationOutcome:
    """Mutually edge-disjoint configurations, one per layout, with backtracking.

    Forced edges are external to the host and do not consume host edges.
    """
    if not layouts:
        raise ValueError("need at least one layout")
    for lay in layouts:
        _check_layout_host(g, lay)
    budget = _budget(budget)
    need = 0
    for lay in layouts:
        inner = g.n - len(lay.vertices())
        need += inner + sum(1 for f in lay.forced_flags() if not f)
    if need > g.m:
        return ConfigurationOutcome(False, stuck_layout=0, reason=f"layouts need {need} host edges, host has {g.m}")
    deepest = [0]

    def rec(i: int, adj: list[int]) -> list[SpanningConfiguration] | None:
        deepest[0] = max(deepest[0], i)
        if i == len(layouts):
            return []
        for conf in spanning_configurations(adj, layouts[i], budget):
            rest = list(adj)
            for a, b in conf.host_edges():
                rest[a] &= ~(1 << b)
                rest[b] &= ~(1 << a)
            tail = rec(i + 1, rest)
            if tail is not None:
                return [conf] + tail
        return None

    found = rec(0, list(g.adj_mask))
    if found is None:
        k = deepest[0]
        return ConfigurationOutcome(False, stuck_layout=k, reason=f"layout {k} has no configuration edge-disjoint from layouts 0..{k - 1}")
    used = {e for conf in found for e in conf.host_edges()}
    residual = SimpleGraph(g.n, frozenset(g.edges - used))
    return ConfigurationOutcome(True, tuple(found), residual)


def check_paths_cover(g: SimpleGraph, paths: Iterable[Sequence[int]]) -> bool:
    """Paths use host edges, are vertex-disjoint and cover V(g) exactly."""
    seen: list[int] = []
    for p in paths:
        seen += list(p)
        if any(not g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1)):
            return False
    return sorted(seen) == list(range(g.n))
