"""Peel Hamilton paths through the high-degree part until a case route applies.

Each iteration picks two middle-degree vertices x_i, y_i and schedules a
Hamilton (x_i, y_i)-path through the current core G*_{i-1}. Degree
bookkeeping is advanced symbolically first; afterwards all paths are
realised at once as edge-disjoint spanning configurations of layouts in the
initial core G*_0, then spliced back to the vertices outside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .._util import Budget, as_fraction
from ..graph import Edge, LinearForest, SimpleGraph, norm, remove_edges
from ..hamilton import Layout, edge_disjoint_spanning_configs
from .common import PipelineParams, PipelineTrace, RouteFailure, budget_of, path_edges

ROUTE = "theorem14_reduction"


@dataclass(frozen=True)
class LoopState:
    """Degrees d_i and the classes derived from them after i iterations."""

    i: int
    d: tuple
    gap: int
    middle: frozenset  # W_i
    far: frozenset  # U_i
    low: frozenset  # V_i
    next_low: frozenset  # Z_i
    core: frozenset  # V(G*_i)

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "d": list(self.d),
            "g": self.gap,
            "W": sorted(self.middle),
            "U": sorted(self.far),
            "V": sorted(self.low),
            "Z": sorted(self.next_low),
            "core": sorted(self.core),
        }


def _classes(i: int, d: Sequence[int], top: int, bottom: int, en: Fraction) -> LoopState:
    n = len(d)
    cap = top - 2 * i
    middle = frozenset(v for v in range(n) if bottom < d[v] < cap)
    far = frozenset(v for v in range(n) if cap - d[v] >= en)
    low = frozenset(v for v in range(n) if d[v] == bottom)
    next_low = frozenset(v for v in range(n) if d[v] == bottom + 1)
    core = frozenset(range(n)) - far - low - next_low
    return LoopState(i, tuple(d), top - bottom - 2 * i, middle, far, low, next_low, core)


def initial_state(g: SimpleGraph, eta) -> LoopState:
    return _classes(0, g.degrees, g.max_degree, g.min_degree, as_fraction(eta) * g.n)


def advance_state(g: SimpleGraph, prev: LoopState, x: int, y: int, eta) -> LoopState:
    """One step of the recurrence: core vertices lose 2, the endpoints lose 1."""
    d = list(prev.d)
    for v in prev.core:
        if v not in (x, y):
            d[v] -= 2
    d[x] -= 1
    d[y] -= 1
    return _classes(prev.i + 1, d, g.max_degree, g.min_degree, as_fraction(eta) * g.n)


def recompute_state(g: SimpleGraph, paths: Sequence[Sequence[int]], eta) -> LoopState:
    """The state after len(paths) iterations, read off the degrees of G minus the paths."""
    used = [e for p in paths for e in path_edges(p)]
    residual = remove_edges(g, used)
    return _classes(len(paths), residual.degrees, g.max_degree, g.min_degree, as_fraction(eta) * g.n)


def loop_guard(state: LoopState, eta, n: int) -> bool:
    en = as_fraction(eta) * n
    return state.gap >= 3 and len(state.middle) >= 2 and len(state.far | state.low | state.next_low) < en


@dataclass
class _Step:
    x: int
    y: int
    xp: int
    yp: int
    splices: list  # (z, z1, z2)
    connectors: tuple
    isolated: tuple
    before: LoopState
    after: LoopState


class _Picker:
    """Vertex choices in G*_0 under the per-vertex usage quota and fresh-edge rule."""

    def __init__(self, g: SimpleGraph, core0: frozenset, quota: int):
        self.g = g
        self.core0 = core0
        self.quota = quota
        self.uses: dict[int, int] = {}
        self.used_edges: set[Edge] = set()
        self.connector_uses: dict[int, int] = {}

    def charge(self, v: int) -> None:
        self.uses[v] = self.uses.get(v, 0) + 1
        if self.uses[v] > self.quota:
            raise RouteFailure(ROUTE, f"vertex {v} of G*_0 exceeds its usage quota of {self.quota}")

    def neighbour(self, z: int, allowed: set[int], avoid: set[int]) -> int | None:
        for v in sorted(allowed - avoid):
            if self.g.has_edge(z, v) and norm(z, v) not in self.used_edges and self.uses.get(v, 0) < self.quota:
                return v
        return None


def _plan_step(g: SimpleGraph, state: LoopState, x: int, y: int, picker: _Picker) -> tuple:
    core0 = picker.core0
    allowed = set(core0 - state.low - state.next_low)
    ends: list[int] = []
    for v in (x, y):
        if v in core0:
            ends.append(v)
            continue
        p = picker.neighbour(v, allowed, {x, y, *ends})
        if p is None:
            raise RouteFailure(ROUTE, f"no fresh neighbour in G*_0 for endpoint {v}")
        picker.used_edges.add(norm(v, p))
        ends.append(p)
    xp, yp = ends
    if xp == yp:
        raise AssertionError("x' and y' coincide")
    for v in (xp, yp):
        picker.charge(v)
    splices = []
    taken = {xp, yp, x, y}
    for z in sorted(state.core - core0 - {x, y}):
        pair = []
        for _ in range(2):
            v = picker.neighbour(z, allowed, taken)
            if v is None:
                raise RouteFailure(ROUTE, f"vertex {z} outside G*_0 has no two fresh neighbours inside it")
            picker.used_edges.add(norm(z, v))
            picker.charge(v)
            taken.add(v)
            pair.append(v)
        splices.append((z, pair[0], pair[1]))
    in_forced = {xp, yp} | {v for _, a, b in splices for v in (a, b)}
    conns = [
        v for v in sorted(allowed - in_forced) if picker.connector_uses.get(v, 0) < 2
    ][:2]
    if len(conns) < 2:
        raise RouteFailure(ROUTE, "no two connector vertices left in G*_0")
    for v in conns:
        picker.connector_uses[v] = picker.connector_uses.get(v, 0) + 1
    isolated = tuple(sorted(((state.low | state.next_low) & core0) - {x, y}))
    return xp, yp, splices, tuple(conns), isolated


def _layout(step: _Step, idx: dict[int, int]) -> Layout:
    chain = [step.xp, step.yp]
    forced = [(step.xp, step.yp)]
    for _, a, b in step.splices:
        chain += [a, b]
        forced.append((a, b))
    v1, v2 = step.connectors
    walk = [v1] + chain + [v2, v1]
    return Layout(
        (tuple(idx[v] for v in walk),),
        tuple((idx[a], idx[b]) for a, b in forced),
        tuple(idx[v] for v in step.isolated),
    )


def _splice(step: _Step, cycle: list[int]) -> list[int]:
    """Open the configuration cycle at x'y' and route through the outside vertices."""
    pos = cycle.index(step.yp)
    walk = cycle[pos:] + cycle[:pos]
    if walk[-1] != step.xp:
        walk = [step.yp] + walk[1:][::-1]
        if walk[-1] != step.xp:
            raise AssertionError("forced edge x'y' is not on the configuration cycle")
    walk = walk[::-1]  # x' ... y'
    for z, a, b in step.splices:
        for j in range(len(walk) - 1):
            if {walk[j], walk[j + 1]} == {a, b}:
                walk = walk[: j + 1] + [z] + walk[j + 1 :]
                break
        else:
            raise AssertionError(f"forced edge {a}{b} is not on the configuration cycle")
    if step.xp != step.x:
        walk = [step.x] + walk
    if step.yp != step.y:
        walk = walk + [step.y]
    return walk


@dataclass(frozen=True)
class Reduction14:
    paths: tuple
    residual: SimpleGraph
    trace: PipelineTrace

    def __iter__(self):
        return iter((self.paths, self.residual, self.trace))


def theorem14_reduction(
    g: SimpleGraph,
    params: PipelineParams | None = None,
    budget: Budget | float | None = None,
    trace: PipelineTrace | None = None,
) -> Reduction14:
    """Remove edge-disjoint Hamilton paths through the core until the loop guard fails.

    Returns ``(paths, residual, trace)``; each path is a LinearForest with
    one component. Zero iterations leave the residual equal to g.
    """
    params = params or PipelineParams()
    budget = budget_of(budget)
    trace = trace or PipelineTrace(parameters=params.to_json())
    trace.route = ROUTE
    eta = params.eta
    state = initial_state(g, eta)
    core0 = state.core
    quota = isqrt(int(eta * g.n * g.n))  # floor(sqrt(eta) * n)
    picker = _Picker(g, core0, quota)
    steps: list[_Step] = []
    while loop_guard(state, eta, g.n):
        x, y = sorted(state.middle)[:2]
        xp, yp, splices, conns, isolated = _plan_step(g, state, x, y, picker)
        nxt = advance_state(g, state, x, y, eta)
        steps.append(_Step(x, y, xp, yp, splices, conns, isolated, state, nxt))
        trace.note(f"step {nxt.i}: x={x} y={y} x'={xp} y'={yp} splices={splices} connectors={list(conns)}")
        state = nxt
    if not steps:
        trace.residuals.append(g)
        return Reduction14((), g, trace)

    labels = sorted(core0)
    idx = {v: i for i, v in enumerate(labels)}
    host, _ = g.induced(labels)
    layouts = [_layout(s, idx) for s in steps]
    outcome = edge_disjoint_spanning_configs(host, layouts, budget)
    if not outcome.ok:
        raise RouteFailure(ROUTE, outcome.reason, trace)

    paths: list[list[int]] = []
    current = g
    for step, conf in zip(steps, outcome.configs):
        cycle = []
        for seg in conf.paths:
            cycle += [labels[v] for v in seg[:-1]]
        p = _splice(step, cycle)
        _check_path(g, current, step, p)
        paths.append(p)
        current = remove_edges(current, path_edges(p))
        fresh = recompute_state(g, paths, eta)
        if fresh != step.after:
            raise AssertionError(f"bookkeeping drift after step {step.after.i}")
        trace.iterations.append(
            {
                "x": step.x,
                "y": step.y,
                "x_prime": step.xp,
                "y_prime": step.yp,
                "splices": [list(s) for s in step.splices],
                "connectors": list(step.connectors),
                "isolated": list(step.isolated),
                "path": p,
                "incremental": step.after.to_json(),
                "recomputed": fresh.to_json(),
            }
        )
        trace.residuals.append(current)
    forests = tuple(LinearForest(g.n, frozenset(path_edges(p))) for p in paths)
    trace.removed_forests.extend(sorted(f.edges) for f in forests)
    return Reduction14(forests, current, trace)


def _check_path(g: SimpleGraph, current: SimpleGraph, step: _Step, p: list[int]) -> None:
    want = set(step.before.core) | {step.x, step.y}
    if len(p) != len(set(p)) or set(p) != want:
        raise AssertionError(f"step {step.after.i}: path does not cover V(G*) plus its endpoints exactly")
    if (p[0], p[-1]) != (step.x, step.y):
        raise AssertionError(f"step {step.after.i}: path ends are not x_i, y_i")
    if any(not current.has_edge(a, b) for a, b in path_edges(p)):
        raise AssertionError(f"step {step.after.i}: path reuses an edge or leaves the graph")


__all__ = [
    "LoopState",
    "Reduction14",
    "advance_state",
    "initial_state",
    "loop_guard",
    "recompute_state",
    "theorem14_reduction",
]
