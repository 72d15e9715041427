"""Graph containers, degree statistics and linear-forest certification.

Vertices are dense integers ``0..n-1``. Graph values are immutable; every
editing operation returns a new graph.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from ._util import Rational, as_fraction

Edge = tuple[int, int]


def norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _check_pair(n: int, u: int, v: int) -> None:
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        seen: set[Edge] = set()
        for u, v in self.edges:
            _check_pair(self.n, u, v)
            e = norm(u, v)
            if e in seen:
                raise ValueError(f"parallel edge {e} in a simple graph")
            seen.add(e)
        object.__setattr__(self, "edges", frozenset(seen))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "SimpleGraph":
        return cls(n, frozenset((int(u), int(v)) for u, v in edges))

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def cycle(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset(norm(i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset((i, i + 1) for i in range(n - 1)))

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset())

    @cached_property
    def adj(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    @cached_property
    def adj_mask(self) -> list[int]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return norm(u, v) in self.edges

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def min_degree(self) -> int:
        return min(self.degrees, default=0)

    def is_regular(self) -> bool:
        return self.n == 0 or self.max_degree == self.min_degree

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def induced(self, vertices: Iterable[int]) -> tuple["SimpleGraph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; returns it with the old labels."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = frozenset(
            (index[u], index[v]) for u, v in self.edges if u in index and v in index
        )
        return SimpleGraph(len(keep), edges), keep

    def components(self, within: Iterable[int] | None = None) -> list[list[int]]:
        alive = set(range(self.n)) if within is None else set(within)
        comps = []
        while alive:
            root = min(alive)
            alive.discard(root)
            stack, comp = [root], [root]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if w in alive:
                        alive.discard(w)
                        stack.append(w)
                        comp.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class MultiGraph:
    """Loopless multigraph; ``edges`` is a sorted tuple with repetitions."""

    n: int
    edges: tuple = ()

    def __post_init__(self):
        out = []
        for u, v in self.edges:
            _check_pair(self.n, u, v)
            out.append(norm(u, v))
        object.__setattr__(self, "edges", tuple(sorted(out)))

    @cached_property
    def multiplicity(self) -> Counter:
        return Counter(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def max_multiplicity(self) -> int:
        return max(self.multiplicity.values(), default=0)

    def underlying(self) -> SimpleGraph:
        return SimpleGraph(self.n, frozenset(self.multiplicity))


@dataclass(frozen=True)
class DiGraph:
    n: int
    arcs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        arcs = set()
        for u, v in self.arcs:
            _check_pair(self.n, u, v)
            arcs.add((u, v))
        object.__setattr__(self, "arcs", frozenset(arcs))

    @cached_property
    def out_mask(self) -> list[int]:
        masks = [0] * self.n
        for u, v in self.arcs:
            masks[u] |= 1 << v
        return masks

    @cached_property
    def in_mask(self) -> list[int]:
        masks = [0] * self.n
        for u, v in self.arcs:
            masks[v] |= 1 << u
        return masks

    def out_degree(self, v: int) -> int:
        return self.out_mask[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.in_mask[v].bit_count()

    def min_semidegree(self) -> int:
        return min(
            (min(self.out_degree(v), self.in_degree(v)) for v in range(self.n)), default=0
        )

    @classmethod
    def complete(cls, n: int) -> "DiGraph":
        return cls(n, frozenset((u, v) for u in range(n) for v in range(n) if u != v))

    @classmethod
    def cycle(cls, n: int) -> "DiGraph":
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n)))


# -- degree statistics -------------------------------------------------------


def degree_profile(g: SimpleGraph) -> tuple[int, int, list[int]]:
    """Return ``(max degree, min degree, degrees sorted non-decreasing)``."""
    if g.n == 0:
        raise ValueError("degree profile of the empty graph (n = 0) is undefined")
    degs = sorted(g.degrees)
    return degs[-1], degs[0], degs


def vertices_by_degree(g: SimpleGraph) -> list[int]:
    """Vertices ordered by non-decreasing degree, ties by index."""
    return sorted(range(g.n), key=lambda v: (g.degrees[v], v))


@dataclass(frozen=True)
class VertexClasses:
    delta_set: frozenset
    delta_plus_one_set: frozenset
    max_set: frozenset
    middle_set: frozenset
    far_set: frozenset
    gap: int
    max_degree: int
    min_degree: int


def vertex_classes(g: SimpleGraph, eta: Rational) -> VertexClasses:
    """Split V(G) into the minimum-degree, maximum-degree, middle and far classes.

    ``far_set`` holds vertices whose degree is at least ``eta * n`` below the
    maximum; the comparison is done in exact rationals.
    """
    eta = as_fraction(eta)
    if not 0 < eta < 1:
        raise ValueError("eta must lie strictly between 0 and 1")
    big, small, _ = degree_profile(g)
    deg = g.degrees
    threshold = eta * g.n
    low = frozenset(v for v in range(g.n) if deg[v] == small)
    high = frozenset(v for v in range(g.n) if deg[v] == big)
    return VertexClasses(
        delta_set=low,
        delta_plus_one_set=frozenset(v for v in range(g.n) if deg[v] == small + 1),
        max_set=high,
        middle_set=frozenset(range(g.n)) - low - high,
        far_set=frozenset(v for v in range(g.n) if big - deg[v] >= threshold),
        gap=big - small,
        max_degree=big,
        min_degree=small,
    )


# -- editing ------------------------------------------------------------------


def complement(g: SimpleGraph) -> SimpleGraph:
    return SimpleGraph(
        g.n,
        frozenset(
            (u, v) for u in range(g.n) for v in range(u + 1, g.n) if (u, v) not in g.edges
        ),
    )


def remove_edges(g: SimpleGraph, items: Iterable[Sequence[int]]) -> SimpleGraph:
    drop = set()
    for u, v in items:
        e = norm(u, v)
        if e not in g.edges:
            raise ValueError(f"cannot remove non-edge {e}")
        if e in drop:
            raise ValueError(f"edge {e} removed twice")
        drop.add(e)
    return SimpleGraph(g.n, g.edges - drop)


def add_edges(g: SimpleGraph, items: Iterable[Sequence[int]]) -> SimpleGraph:
    new = set(g.edges)
    for u, v in items:
        _check_pair(g.n, u, v)
        e = norm(u, v)
        if e in new:
            raise ValueError(f"edge {e} already present")
        new.add(e)
    return SimpleGraph(g.n, frozenset(new))


def add_vertex(g: SimpleGraph, neighbors: Iterable[int] = ()) -> SimpleGraph:
    """Append vertex ``n``, optionally joined to ``neighbors``."""
    x = g.n
    return SimpleGraph(g.n + 1, g.edges | {(v, x) for v in neighbors})


def remove_vertices(g: SimpleGraph, vertices: Iterable[int]) -> tuple[SimpleGraph, list[int]]:
    gone = set(vertices)
    return g.induced(v for v in range(g.n) if v not in gone)


# -- linear forests -----------------------------------------------------------


@dataclass(frozen=True)
class LinearForest:
    host_n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(norm(u, v) for u, v in self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def paths(self) -> list[list[int]]:
        """Vertex sequences of the non-trivial components."""
        adj: dict[int, list[int]] = {}
        for u, v in self.edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        seen: set[int] = set()
        out = []
        for start in sorted(adj):
            if start in seen or len(adj[start]) != 1:
                continue
            walk, prev, cur = [start], None, start
            seen.add(start)
            while True:
                nxt = [w for w in adj[cur] if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                walk.append(cur)
                seen.add(cur)
            out.append(walk)
        return out


@dataclass(frozen=True)
class LinearForestDecomposition:
    forests: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "forests", tuple(self.forests))

    def __len__(self) -> int:
        return len(self.forests)

    @property
    def count(self) -> int:
        return len(self.forests)

    def as_edge_lists(self) -> list[list[Edge]]:
        return [sorted(f.edges) for f in self.forests]


@dataclass(frozen=True)
class DecompositionVerdict:
    ok: bool
    reason: str | None = None
    witness: object = None
    forest_index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _find(parent: dict, x: int) -> int:
    root = x
    while parent.get(root, root) != root:
        root = parent[root]
    while parent.get(x, x) != root:
        parent[x], x = root, parent[x]
    return root


def check_linear_forest(edges: Iterable[Edge]) -> tuple[str, object] | None:
    """Return ``(reason, witness)`` if the edge set is not a linear forest."""
    deg: Counter = Counter()
    parent: dict[int, int] = {}
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
        for x in (u, v):
            if deg[x] > 2:
                return "degree", x
        ru, rv = _find(parent, u), _find(parent, v)
        if ru == rv:
            return "cycle", norm(u, v)
        parent[ru] = rv
    return None


def validate_decomposition(g: SimpleGraph, d: LinearForestDecomposition) -> DecompositionVerdict:
    """Certify that ``d`` partitions E(g) into linear forests.

    Rejections name the violated condition: ``foreign edge``, ``repeated edge``,
    ``degree`` (a vertex of degree 3 inside one forest), ``cycle`` or
    ``missing edge``.
    """
    covered: dict[Edge, int] = {}
    for i, f in enumerate(d.forests):
        if f.host_n != g.n:
            return DecompositionVerdict(False, "host mismatch", f.host_n, i)
        for e in sorted(f.edges):
            if e not in g.edges:
                return DecompositionVerdict(False, "foreign edge", e, i)
            if e in covered:
                return DecompositionVerdict(False, "repeated edge", e, i)
            covered[e] = i
        bad = check_linear_forest(sorted(f.edges))
        if bad is not None:
            return DecompositionVerdict(False, bad[0], bad[1], i)
    missing = sorted(g.edges - covered.keys())
    if missing:
        return DecompositionVerdict(False, "missing edge", missing[0])
    return DecompositionVerdict(True)


def decomposition_from_edge_sets(n: int, edge_sets: Iterable[Iterable[Edge]]) -> LinearForestDecomposition:
    return LinearForestDecomposition(tuple(LinearForest(n, frozenset(es)) for es in edge_sets))


def la_lower_bound(g: SimpleGraph) -> int:
    """max(ceil(Delta/2), ceil(e/(n-1))): no decomposition can use fewer forests."""
    if g.m == 0:
        return 0
    return max(-(-g.max_degree // 2), -(-g.m // (g.n - 1)))


def conjecture_bound(g: SimpleGraph) -> int:
    """ceil((Delta + 1) / 2)."""
    return (g.max_degree + 2) // 2

