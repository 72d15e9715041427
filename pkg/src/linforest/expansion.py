"""Robust expansion, lower-regularity and balanced orientation.

All thresholds of the form ``nu * n`` are compared in exact rationals: a
vertex belongs to the robust neighbourhood iff its neighbour count is at
least ``ceil(nu * n)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Literal

from ._util import Rational, as_fraction, bits, ceil_frac, floor_frac, mask_of
from .graph import DiGraph, SimpleGraph, norm, remove_edges, remove_vertices

EXACT_CAP = 20


@dataclass(frozen=True)
class ExpanderParams:
    nu: Fraction
    tau: Fraction

    def __post_init__(self):
        nu, tau = as_fraction(self.nu), as_fraction(self.tau)
        if not (0 < nu <= tau < 1):
            raise ValueError(f"need 0 < nu <= tau < 1, got nu={nu}, tau={tau}")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "tau", tau)


@dataclass(frozen=True)
class ExpansionVerdict:
    holds: bool
    witness: frozenset | None = None
    mode: Literal["exact", "sampled"] = "exact"
    samples_checked: int = 0

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out = {"holds": self.holds, "mode": self.mode, "samples_checked": self.samples_checked}
        if self.witness is not None:
            out["witness"] = sorted(self.witness)
        return out


def size_range(n: int, tau: Fraction) -> tuple[int, int]:
    """Admissible |S|: ceil(tau n) .. floor((1 - tau) n), boundaries included."""
    return ceil_frac(tau * n), floor_frac((1 - tau) * n)


def robust_neighborhood(g: SimpleGraph, s: Iterable[int], nu: Rational) -> set[int]:
    nu = as_fraction(nu)
    smask = mask_of(s)
    if smask >> g.n:
        raise ValueError("S contains vertices outside V(G)")
    t = ceil_frac(nu * g.n)
    return {v for v in range(g.n) if (g.adj_mask[v] & smask).bit_count() >= t}


def robust_outneighborhood(d: DiGraph, s: Iterable[int], nu: Rational) -> set[int]:
    nu = as_fraction(nu)
    smask = mask_of(s)
    t = ceil_frac(nu * d.n)
    return {v for v in range(d.n) if (d.in_mask[v] & smask).bit_count() >= t}


def _violates(n: int, in_masks: list[int], smask: int, t: int, need_extra: int) -> bool:
    rn = sum(1 for v in range(n) if (in_masks[v] & smask).bit_count() >= t)
    return rn < smask.bit_count() + need_extra


def _exact_scan(n: int, in_masks: list[int], out_lists: list[list[int]],
                nu: Fraction, tau: Fraction) -> frozenset | None:
    """Gray-code walk over all subsets; returns the first violator or None.

    ``in_masks[v]`` are the vertices whose membership in S counts towards v;
    ``out_lists[u]`` are the vertices whose count changes when u toggles.
    """
    lo, hi = size_range(n, tau)
    if n == 0 or lo > hi:
        return None
    t = ceil_frac(nu * n)
    extra = ceil_frac(nu * n)  # |RN| >= |S| + nu n  <=>  |RN| >= |S| + ceil(nu n)
    cnt = [0] * n
    rn = n if t <= 0 else 0
    size = 0
    smask = 0
    if lo <= 0 <= hi and rn < extra:
        return frozenset()
    for i in range(1, 1 << n):
        u = (i & -i).bit_length() - 1
        bit = 1 << u
        if smask & bit:
            smask ^= bit
            size -= 1
            for x in out_lists[u]:
                if cnt[x] == t:
                    rn -= 1
                cnt[x] -= 1
        else:
            smask |= bit
            size += 1
            for x in out_lists[u]:
                cnt[x] += 1
                if cnt[x] == t:
                    rn += 1
        if lo <= size <= hi and rn < size + extra:
            return frozenset(bits(smask))
    return None


def _exact_undirected(g: SimpleGraph, nu: Fraction, tau: Fraction) -> frozenset | None:
    return _exact_scan(g.n, g.adj_mask, [sorted(a) for a in g.adj], nu, tau)


def is_robust_expander_exact(g: SimpleGraph, p: ExpanderParams, cap: int = EXACT_CAP) -> ExpansionVerdict:
    """Check the robust (nu, tau)-expander condition over every admissible S."""
    if g.n > cap:
        raise ValueError(
            f"n = {g.n} exceeds the exhaustive cap {cap}; use is_robust_expander_sampled"
        )
    witness = _exact_undirected(g, p.nu, p.tau)
    lo, hi = size_range(g.n, p.tau)
    checked = sum(comb(g.n, k) for k in range(max(lo, 0), hi + 1)) if lo <= hi else 0
    if witness is None:
        return ExpansionVerdict(True, None, "exact", checked)
    return ExpansionVerdict(False, witness, "exact", checked)


def _grown_set(g: SimpleGraph, size: int, rng: random.Random) -> list[int]:
    """Grow S from a random vertex, always adding a vertex with most neighbours in S.

    Uniform sets almost never hit sparse cuts; grown sets follow them.
    """
    s = [rng.randrange(g.n)]
    smask = 1 << s[0]
    while len(s) < size:
        scores = [((g.adj_mask[v] & smask).bit_count(), rng.random(), v) for v in range(g.n) if not smask >> v & 1]
        v = max(scores)[2]
        s.append(v)
        smask |= 1 << v
    return s


def is_robust_expander_sampled(g: SimpleGraph, p: ExpanderParams, trials: int | None = None,
                               seed: int = 0) -> ExpansionVerdict:
    """Monte-Carlo search for a violating S. "holds" here is evidence, not proof.

    Odd trials draw S uniformly, even trials grow it greedily from a random vertex.
    """
    if trials is None:
        trials = 64 * g.n
    if trials < 1:
        raise ValueError("trials must be at least 1")
    lo, hi = size_range(g.n, p.tau)
    if lo > hi:
        return ExpansionVerdict(True, None, "sampled", 0)
    rng = random.Random(seed)
    t = ceil_frac(p.nu * g.n)
    verts = list(range(g.n))
    for k in range(1, trials + 1):
        size = rng.randint(lo, hi)
        s = rng.sample(verts, size) if k % 2 else _grown_set(g, size, rng)
        smask = mask_of(s)
        if _violates(g.n, g.adj_mask, smask, t, t):
            return ExpansionVerdict(False, frozenset(s), "sampled", k)
    return ExpansionVerdict(True, None, "sampled", trials)


def is_robust_outexpander_exact(d: DiGraph, p: ExpanderParams, cap: int = EXACT_CAP) -> ExpansionVerdict:
    if d.n > cap:
        raise ValueError(f"n = {d.n} exceeds the exhaustive cap {cap}")
    out_lists = [list(bits(m)) for m in d.out_mask]
    witness = _exact_scan(d.n, d.in_mask, out_lists, p.nu, p.tau)
    return ExpansionVerdict(witness is None, witness, "exact", 0)


def robust_outexpander_spot_check(d: DiGraph, p: ExpanderParams, eps: Rational,
                                  trials: int = 32, seed: int = 0) -> dict:
    """Sample induced subdigraphs on >= eps n vertices and test each exactly.

    Returns the observed failure fraction; this is the only certificate
    offered for the "(eps, prob)-robust" strengthening.
    """
    eps = as_fraction(eps)
    rng = random.Random(seed)
    kmin = max(1, ceil_frac(eps * d.n))
    failures = 0
    for _ in range(trials):
        k = rng.randint(kmin, d.n)
        keep = sorted(rng.sample(range(d.n), k))
        idx = {v: i for i, v in enumerate(keep)}
        sub = DiGraph(k, frozenset((idx[u], idx[v]) for u, v in d.arcs if u in idx and v in idx))
        if not is_robust_outexpander_exact(sub, p, cap=max(EXACT_CAP, k)).holds:
            failures += 1
    return {"trials": trials, "failures": failures, "failure_rate": Fraction(failures, trials)}


# -- lower regularity ---------------------------------------------------------


@dataclass(frozen=True)
class RegularityVerdict:
    holds: bool
    witness: tuple[frozenset, frozenset] | None = None
    mode: Literal["exact", "sampled"] = "exact"
    samples_checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def _worst_partner(g: SimpleGraph, smask: int, tmin: int, target: Fraction):
    """Cheapest T disjoint from S for each admissible |T|; None if no violation."""
    s_size = smask.bit_count()
    rest = sorted(
        ((g.adj_mask[v] & smask).bit_count(), v) for v in range(g.n) if not smask >> v & 1
    )
    total = 0
    for t, (c, _) in enumerate(rest, start=1):
        total += c
        if t >= tmin and total < target * s_size * t:
            return frozenset(v for _, v in rest[:t])
    return None


def is_lower_regular(g: SimpleGraph, p: Rational, eps: Rational, cap: int = 16,
                     trials: int | None = None, seed: int = 0) -> RegularityVerdict:
    """e(S, T) >= (p - eps)|S||T| for all disjoint S, T of size >= eps n.

    For a fixed S the worst T of each size is made of the vertices with the
    fewest neighbours in S, so only S needs enumerating.
    """
    p, eps = as_fraction(p), as_fraction(eps)
    kmin = max(1, ceil_frac(eps * g.n))
    target = p - eps
    if g.n <= cap:
        for k in range(kmin, g.n - kmin + 1):
            for s in combinations(range(g.n), k):
                smask = mask_of(s)
                t = _worst_partner(g, smask, kmin, target)
                if t is not None:
                    return RegularityVerdict(False, (frozenset(s), t), "exact")
        return RegularityVerdict(True, None, "exact")
    rng = random.Random(seed)
    trials = 64 * g.n if trials is None else trials
    for k in range(1, trials + 1):
        size = rng.randint(kmin, max(kmin, g.n - kmin))
        s = rng.sample(range(g.n), size)
        t = _worst_partner(g, mask_of(s), kmin, target)
        if t is not None:
            return RegularityVerdict(False, (frozenset(s), t), "sampled", k)
    return RegularityVerdict(True, None, "sampled", trials)


# -- orientation and splitting --------------------------------------------------


def orient_balanced(g: SimpleGraph, seed: int = 0) -> tuple[DiGraph, dict]:
    """Orient E(g) so that every vertex has |out - in| <= 1.

    Odd-degree vertices are joined to a phantom vertex, every component of
    the result is Eulerian, and edges are oriented along an Euler circuit.
    """
    rng = random.Random(seed)
    phantom = g.n
    incident: list[list[int]] = [[] for _ in range(g.n + 1)]
    ends: list[tuple[int, int]] = []
    for u, v in sorted(g.edges):
        incident[u].append(len(ends))
        incident[v].append(len(ends))
        ends.append((u, v))
    real_m = len(ends)
    for v in range(g.n):
        if len(g.adj[v]) % 2:
            incident[v].append(len(ends))
            incident[phantom].append(len(ends))
            ends.append((v, phantom))
    for lst in incident:
        rng.shuffle(lst)
    used = [False] * len(ends)
    ptr = [0] * (g.n + 1)
    arcs = set()
    starts = list(range(g.n + 1))
    rng.shuffle(starts)
    for start in starts:
        # Hierholzer; arcs are recorded in the direction each edge is first walked.
        stack = [start]
        while stack:
            u = stack[-1]
            while ptr[u] < len(incident[u]) and used[incident[u][ptr[u]]]:
                ptr[u] += 1
            if ptr[u] == len(incident[u]):
                stack.pop()
                continue
            eid = incident[u][ptr[u]]
            used[eid] = True
            a, b = ends[eid]
            w = b if a == u else a
            if eid < real_m:
                arcs.add((u, w))
            stack.append(w)
    d = DiGraph(g.n, frozenset(arcs))
    half_dev = max((abs(Fraction(d.out_degree(v)) - Fraction(g.degrees[v], 2)) for v in range(g.n)),
                   default=Fraction(0))
    imbalance = max((abs(d.out_degree(v) - d.in_degree(v)) for v in range(g.n)), default=0)
    return d, {"max_out_deviation": half_dev, "max_imbalance": imbalance}


def split_digraph(d: DiGraph, lam: Rational, seed: int = 0) -> tuple[DiGraph, DiGraph, dict]:
    """Send each arc to the first part with probability ``lam``, else the second."""
    lam = as_fraction(lam)
    if not 0 <= lam <= 1:
        raise ValueError("lambda must lie in [0, 1]")
    rng = random.Random(seed)
    first, second = set(), set()
    for arc in sorted(d.arcs):
        if lam == 1 or (lam > 0 and rng.random() < lam):
            first.add(arc)
        else:
            second.add(arc)
    d1, d2 = DiGraph(d.n, frozenset(first)), DiGraph(d.n, frozenset(second))
    out_dev = [abs(d1.out_degree(v) - lam * d.out_degree(v)) for v in range(d.n)]
    in_dev = [abs(d1.in_degree(v) - lam * d.in_degree(v)) for v in range(d.n)]
    report = {
        "out_deviation": out_dev,
        "in_deviation": in_dev,
        "max_deviation": max(out_dev + in_dev, default=Fraction(0)),
    }
    return d1, d2, report


# -- stability under perturbation -------------------------------------------------


@dataclass(frozen=True)
class Removal:
    edges: tuple = ()
    vertices: tuple = ()


@dataclass(frozen=True)
class StabilityVerdict:
    before: ExpansionVerdict
    after: ExpansionVerdict
    degraded: tuple[Fraction, Fraction]
    part: str
    perturbed: SimpleGraph = field(repr=False, default=None)

    @property
    def holds(self) -> bool:
        return self.after.holds

    def __bool__(self) -> bool:
        return self.holds


def stability_check(g: SimpleGraph, p: ExpanderParams, eps: Rational, removal: Removal,
                    cap: int = EXACT_CAP) -> StabilityVerdict:
    """Perturb an exact expander and re-verify at the degraded parameters.

    Edge removal (at most eps n per vertex) is checked at (nu - eps, tau);
    vertex removal (at most eps n vertices, needs tau >= (1 + 2 tau) eps) at
    (nu - eps, 2 tau).
    """
    eps = as_fraction(eps)
    if eps < 0 or eps > p.nu:
        raise ValueError("need 0 <= eps <= nu")
    if removal.edges and removal.vertices:
        raise ValueError("remove edges or vertices, not both")
    before = is_robust_expander_exact(g, p, cap)
    if not before.holds:
        raise ValueError("input graph is not a robust (nu, tau)-expander")
    limit = eps * g.n
    if removal.vertices:
        if p.tau < (1 + 2 * p.tau) * eps:
            raise ValueError("vertex removal needs tau >= (1 + 2 tau) eps")
        if len(set(removal.vertices)) > limit:
            raise ValueError(f"removing {len(set(removal.vertices))} vertices exceeds eps n = {limit}")
        perturbed, _ = remove_vertices(g, removal.vertices)
        degraded = (p.nu - eps, 2 * p.tau)
        part = "b"
    else:
        lost = [0] * g.n
        for u, v in removal.edges:
            lost[u] += 1
            lost[v] += 1
        if any(c > limit for c in lost):
            raise ValueError(f"some vertex loses more than eps n = {limit} edges")
        perturbed = remove_edges(g, [norm(u, v) for u, v in removal.edges])
        degraded = (p.nu - eps, p.tau)
        part = "a"
    witness = _exact_undirected(perturbed, degraded[0], degraded[1]) if perturbed.n <= cap else None
    if perturbed.n > cap:
        raise ValueError("perturbed graph exceeds the exhaustive cap")
    after = ExpansionVerdict(witness is None, witness, "exact", 0)
    return StabilityVerdict(before, after, degraded, part, perturbed)
