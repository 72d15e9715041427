"""Degree-sequence realization and the regular supergraph construction."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import MultiGraph, SimpleGraph


class InfeasibleSequence(ValueError):
    """The degree sequence cannot be realized; the message names the violated condition."""


@dataclass(frozen=True)
class DegreeSequence:
    values: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError("degrees must be non-negative")
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError("degree sequence must be non-increasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, values: Iterable[int]) -> "DegreeSequence":
        return cls(tuple(sorted((int(v) for v in values), reverse=True)))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def total(self) -> int:
        return sum(self.values)

    @property
    def even(self) -> bool:
        return self.total % 2 == 0


def _values(seq: DegreeSequence | Sequence[int]) -> list[int]:
    vals = list(seq.values if isinstance(seq, DegreeSequence) else seq)
    if any(v < 0 for v in vals):
        raise InfeasibleSequence("negative degree")
    return vals


def hakimi_multigraph(seq: DegreeSequence | Sequence[int]) -> MultiGraph:
    """Loopless multigraph with vertex i of degree seq[i].

    Feasible iff the sum is even and the largest degree is at most the sum
    of the others. Repeatedly joins the two vertices of largest remaining
    degree.
    """
    vals = _values(seq)
    total = sum(vals)
    if total % 2:
        raise InfeasibleSequence(f"parity: degree sum {total} is odd")
    if vals and 2 * max(vals) > total:
        raise InfeasibleSequence(f"dominance: d1 = {max(vals)} exceeds the sum of the others {total - max(vals)}")
    heap = [(-d, v) for v, d in enumerate(vals) if d > 0]
    heapq.heapify(heap)
    edges = []
    while heap:
        d1, a = heapq.heappop(heap)
        d2, b = heapq.heappop(heap)
        edges.append((min(a, b), max(a, b)))
        for d, v in ((d1 + 1, a), (d2 + 1, b)):
            if d < 0:
                heapq.heappush(heap, (d, v))
    return MultiGraph(len(vals), tuple(edges))


def erdos_gallai_feasible(seq: DegreeSequence | Sequence[int]) -> bool:
    d = sorted(_values(seq), reverse=True)
    n = len(d)
    if sum(d) % 2:
        return False
    if any(x > n - 1 for x in d):
        return False
    prefix = 0
    for k in range(1, n + 1):
        prefix += d[k - 1]
        if prefix > k * (k - 1) + sum(min(x, k) for x in d[k:]):
            return False
    return True


def havel_hakimi(seq: DegreeSequence | Sequence[int]) -> SimpleGraph:
    """Simple graph with vertex i of degree seq[i], or InfeasibleSequence."""
    vals = _values(seq)
    n = len(vals)
    if sum(vals) % 2:
        raise InfeasibleSequence(f"parity: degree sum {sum(vals)} is odd")
    rem = list(vals)
    edges = []
    for _ in range(n):
        v = max(range(n), key=lambda u: (rem[u], -u))
        k = rem[v]
        if k == 0:
            break
        rem[v] = 0
        others = sorted((u for u in range(n) if u != v and rem[u] > 0), key=lambda u: (-rem[u], u))
        if len(others) < k:
            raise InfeasibleSequence("not graphic: a vertex needs more neighbours than remain")
        for u in others[:k]:
            rem[u] -= 1
            edges.append((min(u, v), max(u, v)))
    if any(rem):
        raise InfeasibleSequence("not graphic")
    return SimpleGraph.from_edges(n, edges)


def near_regular_simple(n: int, d: int, t: int) -> SimpleGraph:
    """Simple graph: vertices 0..t-1 of degree d, the remaining n - t of degree d - 1."""
    if not n >= d + 1 >= 3:
        raise ValueError(f"need n >= d + 1 >= 3; got n = {n}, d = {d}")
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n; got t = {t}")
    if (t * d + (n - t) * (d - 1)) % 2:
        raise ValueError(f"parity: t*d + (n-t)*(d-1) = {t * d + (n - t) * (d - 1)} is odd")
    return havel_hakimi([d] * t + [d - 1] * (n - t))


# -- regular supergraph -------------------------------------------------------------


@dataclass(frozen=True)
class SupergraphEmbedding:
    host: SimpleGraph
    base_n: int
    x_set: tuple
    def_edges: tuple
    r_graph: SimpleGraph
    d: int
    ell: int

    def to_json(self) -> dict:
        return {
            "n": self.host.n,
            "base_n": self.base_n,
            "X": list(self.x_set),
            "d": self.d,
            "ell": self.ell,
            "def_edges": [list(e) for e in self.def_edges],
            "R": [list(e) for e in self.r_graph.edge_list()],
        }


def supergraph_size(n: int, delta_star: int, deficit: int) -> int:
    """Smallest |X| >= ceil((D+4)/2) with |X| = n (mod 2) and |X| >= D - floor(def/|X|) + 4."""
    size = (delta_star + 5) // 2
    while True:
        if (size - n) % 2 == 0 and size >= delta_star - deficit // size + 4:
            return size
        size += 1


def case1_supergraph(gstar: SimpleGraph, delta_star: int) -> SupergraphEmbedding:
    """Embed G* as an induced subgraph of a simple delta_star-regular graph.

    New vertices X form a graph R with |X| - ell vertices of degree d and ell
    of degree d - 1; each deficient vertex of G* is joined to X by as many
    edges as it lacks, listed consecutively and dealt to X cyclically.
    """
    n = gstar.n
    if delta_star % 2:
        raise ValueError("delta_star must be even")
    if gstar.max_degree > delta_star:
        raise ValueError("delta_star is below the maximum degree of G*")
    deficit = sum(delta_star - d for d in gstar.degrees)
    if deficit < delta_star + 5:
        raise ValueError(f"def(G*) = {deficit} < delta_star + 5 = {delta_star + 5}; outside this construction's regime")
    size = supergraph_size(n, delta_star, deficit)
    spread = delta_star - gstar.min_degree
    if size <= spread:
        raise ValueError(f"|X| = {size} does not exceed delta_star - delta = {spread}; cross edges would repeat")
    q = -(-deficit // size)
    ell = deficit - size * (q - 1)  # in [1, |X|]; def divisible by |X| gives ell = |X|
    d = delta_star - q + 1
    if d - 1 < 0:
        raise ValueError("R would need negative degrees")
    if d - 1 < size - 6:
        raise AssertionError(f"d - 1 = {d - 1} < |X| - 6 = {size - 6}")
    r_degrees = [d - 1] * ell + [d] * (size - ell)
    try:
        r_graph = havel_hakimi(r_degrees)
    except InfeasibleSequence as exc:
        raise ValueError(f"R with degrees {r_degrees} is not realizable: {exc}") from exc
    slots = [v for v in range(n) for _ in range(delta_star - gstar.degrees[v])]
    def_edges = tuple((v, n + j % size) for j, v in enumerate(slots))
    if len(set(def_edges)) != len(def_edges):
        raise AssertionError("a deficient vertex was paired twice with the same new vertex")
    edges = list(gstar.edges) + list(def_edges)
    edges += [(n + a, n + b) for a, b in r_graph.edges]
    host = SimpleGraph.from_edges(n + size, edges)
    if any(deg != delta_star for deg in host.degrees):
        raise AssertionError("supergraph is not regular")
    return SupergraphEmbedding(host, n, tuple(range(n, n + size)), def_edges, r_graph, d, ell)
