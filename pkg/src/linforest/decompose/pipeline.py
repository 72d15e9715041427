"""Top-level dispatcher: pick a constructive route, fall back to search, always validate."""

from __future__ import annotations

from .._util import Budget, SearchBudgetExceeded, as_fraction
from ..graph import (
    LinearForestDecomposition,
    SimpleGraph,
    conjecture_bound,
    decomposition_from_edge_sets,
    validate_decomposition,
)
from .cases import classify, complete_low_vertices, theorem31_decompose
from .common import PipelineParams, PipelineTrace, RouteFailure, budget_of
from .loop import theorem14_reduction
from .oracle import OracleBudgetExceeded, greedy_linear_forests, la_exact
from .regular import la_regular_expander

STRATEGIES = ("auto", "oracle", "pipeline")

SUCCESS = "success"
BEST_EFFORT = "best_effort"
UNKNOWN = "unknown"
FAILURE = "failure"


def _pipeline(g: SimpleGraph, params: PipelineParams, budget: Budget, trace: PipelineTrace) -> list[set]:
    if g.is_regular():
        trace.route = "regular_route"
        return [set(f.edges) for f in la_regular_expander(g, params.hd_cap, budget).forests]
    completed, _ = complete_low_vertices(g)
    if classify(completed, params.eta) is not None:
        dec, _ = theorem31_decompose(g, params, budget, trace)
        return [set(f.edges) for f in dec.forests]
    paths, residual, _ = theorem14_reduction(g, params, budget, trace)
    if not paths:
        raise RouteFailure("theorem14_reduction", "no case applies and the reduction loop cannot start", trace)
    sets = [set(p.edges) for p in paths]
    if residual.m == 0:
        return sets
    if residual.is_regular():
        trace.note("residual is regular")
        rest = [set(f.edges) for f in la_regular_expander(residual, params.hd_cap, budget).forests]
    else:
        inner = PipelineTrace(parameters=trace.parameters)
        dec, inner = theorem31_decompose(residual, params, budget, inner)
        trace.note(f"residual handled by {inner.route}")
        trace.events.extend(inner.events)
        trace.added_clique_edges = inner.added_clique_edges
        rest = [set(f.edges) for f in dec.forests]
    trace.route = "theorem14_reduction"
    return sets + rest


def _meets_hypotheses(g: SimpleGraph, params: PipelineParams) -> bool:
    """Linear minimum degree, the one hypothesis cheap enough to test every time."""
    return g.n > 0 and g.min_degree >= as_fraction(params.alpha) * g.n


def _finish(g: SimpleGraph, sets, trace: PipelineTrace, status: str) -> tuple[LinearForestDecomposition, PipelineTrace]:
    dec = decomposition_from_edge_sets(g.n, [s for s in sets if s])
    verdict = validate_decomposition(g, dec)
    if not verdict:
        raise AssertionError(f"{trace.route}: invalid decomposition ({verdict.reason} at {verdict.witness})")
    if status == SUCCESS and dec.count > conjecture_bound(g):
        raise AssertionError(f"{trace.route}: {dec.count} forests exceed the bound {conjecture_bound(g)}")
    trace.status = status
    trace.removed_forests = [sorted(f.edges) for f in dec.forests]
    return dec, trace


def _oracle(g: SimpleGraph, budget: Budget, trace: PipelineTrace, cap: int):
    trace.route = "exact_oracle"
    try:
        k, dec = la_exact(g, budget, cap=max(cap, g.n))
    except OracleBudgetExceeded as exc:
        trace.fallbacks.append({"route": "exact_oracle", "reason": str(exc)})
        trace.route = "greedy"
        return [set(f.edges) for f in exc.decomposition.forests], UNKNOWN
    status = SUCCESS if k <= conjecture_bound(g) else FAILURE
    if status == FAILURE:
        trace.note(f"exact linear arboricity {k} exceeds the bound {conjecture_bound(g)}")
    return [set(f.edges) for f in dec.forests], status


def decompose(
    g: SimpleGraph,
    params: PipelineParams | None = None,
    strategy: str = "auto",
    budget: Budget | float | None = None,
) -> tuple[LinearForestDecomposition, PipelineTrace]:
    """Decompose g into linear forests and report how.

    ``auto`` tries the constructive routes when the minimum degree is at
    least alpha*n, then the exact oracle (n within the cap), then greedy.
    ``pipeline`` skips the oracle; ``oracle`` skips the routes. The result
    always validates; ``trace.status`` is success, best_effort, unknown or
    failure, and ``trace.fallbacks`` lists every abandoned route with its reason.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {', '.join(STRATEGIES)}")
    params = params or PipelineParams()
    budget = budget_of(budget)
    trace = PipelineTrace(parameters=params.to_json())
    if g.m == 0:
        trace.route = "regular_route" if g.is_regular() else "exact_oracle"
        return _finish(g, [], trace, SUCCESS)
    if strategy == "oracle":
        sets, status = _oracle(g, budget, trace, params.oracle_cap)
        return _finish(g, sets, trace, status)

    try_routes = strategy == "pipeline" or _meets_hypotheses(g, params)
    if not try_routes:
        trace.fallbacks.append({"route": "pipeline", "reason": f"minimum degree {g.min_degree} is below alpha*n"})
    else:
        try:
            return _finish(g, _pipeline(g, params, budget, trace), trace, SUCCESS)
        except RouteFailure as exc:
            trace.fallbacks.append({"route": exc.route, "reason": exc.reason})
        except SearchBudgetExceeded as exc:
            trace.fallbacks.append({"route": trace.route or "pipeline", "reason": str(exc)})
        trace.residuals = []

    if strategy == "auto" and g.n <= params.oracle_cap:
        sets, status = _oracle(g, budget, trace, params.oracle_cap)
        return _finish(g, sets, trace, status)
    trace.route = "greedy"
    dec = greedy_linear_forests(g, restarts=8)
    return _finish(g, [set(f.edges) for f in dec.forests], trace, BEST_EFFORT)


__all__ = ["decompose", "STRATEGIES", "SUCCESS", "BEST_EFFORT", "UNKNOWN", "FAILURE"]
