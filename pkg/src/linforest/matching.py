"""Maximum matchings, deficiency certificates and the almost-regular complement lemma."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from ._util import bits, ceil_frac, mask_of
from .graph import Edge, MultiGraph, SimpleGraph, complement, norm

CERTIFICATE_CAP = 16


class CertificateHypothesisError(ValueError):
    """The supplied X does not behave like a maximal Berge-Tutte set."""


@dataclass(frozen=True)
class Matching:
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(norm(u, v) for u, v in self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def size(self) -> int:
        return len(self.edges)

    def vertices(self) -> set[int]:
        return {x for e in self.edges for x in e}

    def is_valid_in(self, host) -> bool:
        host_edges = host.edges if isinstance(host, SimpleGraph) else set(host.edges)
        seen: set[int] = set()
        for u, v in self.edges:
            if (u, v) not in host_edges or u in seen or v in seen:
                return False
            seen.update((u, v))
        return True


# -- Edmonds' blossom algorithm ----------------------------------------------------


def _blossom(n: int, adj: list[list[int]]) -> list[int]:
    match = [-1] * n
    for v in range(n):  # greedy start
        if match[v] == -1:
            for w in adj[v]:
                if match[w] == -1:
                    match[v], match[w] = w, v
                    break

    def lca(a: int, b: int, base: list[int], parent: list[int]) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark(v: int, b: int, child: int, base, parent, blossom) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def find_path(root: int) -> int:
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))
        used[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to, base, parent)
                    blossom = [False] * n
                    mark(v, cur, to, base, parent, blossom)
                    mark(to, cur, v, base, parent, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return _augment(to, parent)
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    def _augment(v: int, parent: list[int]) -> int:
        end = v
        while v != -1:
            pv = parent[v]
            nxt = match[pv]
            match[v], match[pv] = pv, v
            v = nxt
        return end

    for root in range(n):
        if match[root] == -1 and adj[root]:
            find_path(root)
    return match


def max_matching(g: SimpleGraph | MultiGraph) -> Matching:
    """Maximum-cardinality matching (parallel edges are irrelevant)."""
    if isinstance(g, MultiGraph):
        g = g.underlying()
    mate = _blossom(g.n, [sorted(a) for a in g.adj])
    return Matching(frozenset(norm(v, w) for v, w in enumerate(mate) if w > v))


def max_matching_avoiding(g: SimpleGraph, avoid: Iterable[int]) -> Matching:
    gone = set(avoid)
    sub, labels = g.induced(v for v in range(g.n) if v not in gone)
    m = max_matching(sub)
    return Matching(frozenset(norm(labels[u], labels[v]) for u, v in m.edges))


# -- Berge-Tutte deficiency ---------------------------------------------------------


def odd_components(g: SimpleGraph, xmask: int) -> list[int]:
    """Bitmasks of the odd components of G - X."""
    alive = ((1 << g.n) - 1) & ~xmask
    adj = g.adj_mask
    out = []
    while alive:
        comp = frontier = alive & -alive
        while frontier:
            reach = 0
            for v in bits(frontier):
                reach |= adj[v]
            frontier = reach & alive & ~comp
            comp |= frontier
        alive &= ~comp
        if comp.bit_count() % 2:
            out.append(comp)
    return out


def _all_components(g: SimpleGraph, xmask: int) -> list[int]:
    alive = ((1 << g.n) - 1) & ~xmask
    out = []
    while alive:
        comp = frontier = alive & -alive
        while frontier:
            reach = 0
            for v in bits(frontier):
                reach |= g.adj_mask[v]
            frontier = reach & alive & ~comp
            comp |= frontier
        alive &= ~comp
        out.append(comp)
    return out


def deficiency(g: SimpleGraph) -> int:
    """df(G) = n - 2 * (maximum matching size)."""
    return g.n - 2 * max_matching(g).size


@dataclass(frozen=True)
class DeficiencyCertificate:
    df: int
    x_set: frozenset
    odd_components: tuple

    def to_json(self) -> dict:
        return {
            "df": self.df,
            "X": sorted(self.x_set),
            "components": [sorted(c) for c in self.odd_components],
        }


def is_factor_critical(g: SimpleGraph, vertices: Iterable[int]) -> bool:
    vs = sorted(vertices)
    if len(vs) % 2 == 0:
        return False
    sub, _ = g.induced(vs)
    for v in range(sub.n):
        rest, _ = sub.induced(w for w in range(sub.n) if w != v)
        if 2 * max_matching(rest).size != rest.n:
            return False
    return True


def deficiency_certificate(g: SimpleGraph, cap: int = CERTIFICATE_CAP) -> DeficiencyCertificate:
    """An inclusion-maximal X attaining o(G - X) - |X| = df(G).

    The largest optimiser is found by scanning |X| downward from (n - df)/2;
    a largest optimiser is automatically inclusion-maximal. Every component
    of G - X is then checked to be odd and factor-critical.
    """
    if g.n > cap:
        raise ValueError(f"certificate mode is capped at n = {cap}; got n = {g.n}")

    df = deficiency(g)
    for size in range((g.n - df) // 2, -1, -1):
        for xs in combinations(range(g.n), size):
            xmask = mask_of(xs)
            odd = odd_components(g, xmask)
            if len(odd) - size == df:
                comps = _all_components(g, xmask)
                if len(comps) != len(odd):
                    raise AssertionError("maximal optimiser left an even component")
                comp_sets = tuple(frozenset(bits(c)) for c in comps)
                for c in comp_sets:
                    if not is_factor_critical(g, c):
                        raise AssertionError(f"component {sorted(c)} is not factor-critical")
                return DeficiencyCertificate(df, frozenset(xs), comp_sets)
    raise AssertionError("no optimiser found; matching and deficiency disagree")


# -- the contracted bipartite multigraph B(X) --------------------------------------


@dataclass(frozen=True)
class AuxiliaryBipartite:
    """B(X): vertex i < |X| is x_side[i]; vertex |X| + j is components[j]."""

    graph: MultiGraph
    x_side: tuple
    components: tuple

    @property
    def x_ids(self) -> range:
        return range(len(self.x_side))

    @property
    def y_ids(self) -> range:
        return range(len(self.x_side), len(self.x_side) + len(self.components))


def auxiliary_bipartite(g: SimpleGraph, x_set: Iterable[int]) -> AuxiliaryBipartite:
    xs = tuple(sorted(set(x_set)))
    if any(not 0 <= x < g.n for x in xs):
        raise ValueError("X must be a subset of V(G)")
    comps = tuple(tuple(bits(c)) for c in _all_components(g, mask_of(xs)))
    owner = {}
    for j, comp in enumerate(comps):
        for v in comp:
            owner[v] = len(xs) + j
    edges = []
    for i, x in enumerate(xs):
        for w in sorted(g.adj[x]):
            if w in owner:
                edges.append((i, owner[w]))
    return AuxiliaryBipartite(MultiGraph(len(xs) + len(comps), tuple(edges)), xs, comps)


def _bipartite_matching(left: list[int], nbrs: dict[int, list[int]]) -> dict[int, int]:
    """Kuhn's augmenting paths; returns mate map over both sides."""
    mate: dict[int, int] = {}

    def try_augment(u: int, seen: set[int]) -> bool:
        for w in nbrs.get(u, ()):
            if w in seen:
                continue
            seen.add(w)
            if w not in mate or try_augment(mate[w], seen):
                mate[u], mate[w] = w, u
                return True
        return False

    for u in left:
        try_augment(u, set())
    return mate


def matching_covering_x_and_heavy(b: AuxiliaryBipartite) -> Matching:
    """Matching of B(X) saturating X and every y with d_B(y) >= max_x d_B(x).

    Built from a matching M1 covering X and a matching M2 saturating the
    heavy side, by choosing M1- or M2-edges inside each component of their
    symmetric difference.
    """
    xs = list(b.x_ids)
    if not xs:
        return Matching(frozenset())
    deg = b.graph.degrees
    d = max(deg[x] for x in xs)
    heavy = [y for y in b.y_ids if deg[y] >= d]
    x_nbrs = {x: sorted({w for u, w in b.graph.edges if u == x}) for x in xs}
    m1 = _bipartite_matching(xs, x_nbrs)
    if any(x not in m1 for x in xs):
        raise CertificateHypothesisError("B(X) has no matching covering X")
    heavy_set = set(heavy)
    y_nbrs: dict[int, list[int]] = {}
    for x, ws in x_nbrs.items():
        for w in ws:
            if w in heavy_set:
                y_nbrs.setdefault(w, []).append(x)
    m2 = _bipartite_matching(heavy, y_nbrs)
    if any(y not in m2 for y in heavy):
        raise CertificateHypothesisError("B(X)[X, Y_d] has no matching saturating Y_d")
    e1 = {norm(u, w) for u, w in m1.items()}
    e2 = {norm(u, w) for u, w in m2.items()}
    chosen = set(e1 & e2)
    diff = e1 ^ e2
    adj: dict[int, list[Edge]] = {}
    for e in diff:
        for v in e:
            adj.setdefault(v, []).append(e)
    need = set(xs) | heavy_set
    seen_edges: set[Edge] = set()
    for e0 in sorted(diff):
        if e0 in seen_edges:
            continue
        comp, stack = set(), [e0]
        while stack:
            e = stack.pop()
            if e in comp:
                continue
            comp.add(e)
            for v in e:
                stack.extend(adj[v])
        seen_edges |= comp
        verts = {v for e in comp for v in e}
        for side in (e1, e2):
            pick = comp & side
            if {v for e in pick for v in e} >= (verts & need):
                chosen |= pick
                break
        else:
            raise CertificateHypothesisError("symmetric-difference component cannot be covered")
    return Matching(frozenset(chosen))


# -- almost-regular complements ---------------------------------------------------


def almost_regular_degree(g: SimpleGraph) -> tuple[int, int]:
    """Return ``(r, x)`` if exactly one vertex x has degree r + 1 and the rest r."""
    degs = g.degrees
    if g.n < 2:
        raise ValueError("almost-regular graphs need at least two vertices")
    top = max(degs)
    tops = [v for v in range(g.n) if degs[v] == top]
    rest = {degs[v] for v in range(g.n) if degs[v] != top}
    if len(tops) != 1 or rest != {top - 1}:
        raise ValueError("graph is not almost regular (one vertex of degree r+1, others r)")
    return top - 1, tops[0]


def lemma24_coverage_bound(n: int, r: int) -> int:
    """ceil(n - n/(n - r) - 3), the guaranteed complement-matching coverage."""
    return ceil_frac(n - Fraction(n, n - r) - 3)


def complement_matching_almost_regular(g: SimpleGraph, x: int | None = None) -> Matching:
    """Maximum matching of the complement that avoids the degree-(r+1) vertex."""
    r, top = almost_regular_degree(g)
    if x is not None and x != top:
        raise ValueError(f"vertex {x} is not the vertex of degree r + 1 (that is {top})")
    if r > g.n - 2:
        raise ValueError("need r <= n - 2")
    return max_matching_avoiding(complement(g), [top])
