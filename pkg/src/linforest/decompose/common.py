"""Shared pieces of the decomposition routes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .._util import Budget, as_fraction
from ..graph import Edge, SimpleGraph, norm


class RouteFailure(RuntimeError):
    """A constructive route could not complete at this instance size.

    Not a counterexample: the proof steps behind a route only promise
    success for large n, so desk-scale failures are expected and reported.
    """

    def __init__(self, route: str, reason: str, trace: "PipelineTrace | None" = None):
        super().__init__(f"{route}: {reason}")
        self.route = route
        self.reason = reason
        self.trace = trace


@dataclass
class PipelineTrace:
    route: str = ""
    removed_forests: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    added_clique_edges: list = field(default_factory=list)
    events: list = field(default_factory=list)
    iterations: list = field(default_factory=list)
    status: str = ""
    fallbacks: list = field(default_factory=list)

    def note(self, message: str) -> None:
        self.events.append(message)

    def to_json(self) -> dict:
        return {
            "route": self.route,
            "removed_forests": [sorted(f) for f in self.removed_forests],
            "residual_edge_counts": [r.m for r in self.residuals],
            "parameters": {k: str(v) for k, v in self.parameters.items()},
            "added_clique_edges": [list(e) for e in self.added_clique_edges],
            "events": list(self.events),
            "iterations": self.iterations,
            "status": self.status,
            "fallbacks": list(self.fallbacks),
        }


def path_edges(walk: Sequence[int]) -> list[Edge]:
    return [norm(walk[i], walk[i + 1]) for i in range(len(walk) - 1)]


def cycle_edges(cyc: Sequence[int]) -> list[Edge]:
    return [norm(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]


def strip(edge_sets: Iterable[Iterable[Edge]], keep_n: int, drop: Iterable[Edge] = ()) -> list[set[Edge]]:
    """Drop edges touching vertices >= keep_n and every edge in ``drop``."""
    gone = set(drop)
    out = []
    for es in edge_sets:
        out.append({e for e in es if e[1] < keep_n and e not in gone})
    return out


def add_apex(g: SimpleGraph, neighbors: Iterable[int]) -> SimpleGraph:
    nb = sorted(set(neighbors))
    return SimpleGraph(g.n + 1, frozenset(g.edges | {(v, g.n) for v in nb}))


def budget_of(budget: Budget | float | None) -> Budget:
    if isinstance(budget, Budget):
        return budget
    if budget is None:
        return Budget.from_env()
    return Budget(budget)


@dataclass(frozen=True)
class PipelineParams:
    """User-chosen constants; the asymptotic hierarchy between them is not enforced."""

    nu: Fraction = Fraction(1, 10)
    tau: Fraction = Fraction(1, 5)
    eta: Fraction = Fraction(1, 4)
    alpha: Fraction = Fraction(1, 2)
    k_max: int = 2
    hd_cap: int = 20
    oracle_cap: int = 12
    max_deficiency: int | None = None

    def __post_init__(self):
        for name in ("nu", "tau", "eta", "alpha"):
            value = as_fraction(getattr(self, name))
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie strictly between 0 and 1")
            object.__setattr__(self, name, value)
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")

    def to_json(self) -> dict:
        return {
            "nu": str(self.nu),
            "tau": str(self.tau),
            "eta": str(self.eta),
            "alpha": str(self.alpha),
            "k_max": self.k_max,
            "hd_cap": self.hd_cap,
            "oracle_cap": self.oracle_cap,
            "max_deficiency": self.max_deficiency,
        }
