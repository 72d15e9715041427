"""Seeded graph families used as fixtures and experiment inputs."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ._util import as_fraction
from .graph import SimpleGraph, complement, norm
from .realize import InfeasibleSequence, havel_hakimi

PAIRING_TRIES = 200


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "params": {k: _plain(v) for k, v in self.params.items()}, "seed": self.seed}

    @classmethod
    def from_json(cls, data: dict) -> "GeneratorSpec":
        return cls(data["family"], int(data["n"]), dict(data.get("params", {})), int(data.get("seed", 0)))


def _plain(v):
    return str(v) if isinstance(v, Fraction) else v


def derive_seed(master: int, index: int) -> int:
    """Per-instance seed that does not depend on scheduling order."""
    digest = hashlib.sha256(f"{master}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def shuffle_edges(g: SimpleGraph, rng: random.Random, rounds: int | None = None) -> SimpleGraph:
    """Degree-preserving double edge swaps: ab, cd -> ac, bd when both are new."""
    edges = sorted(g.edges)
    if len(edges) < 2:
        return g
    present = set(edges)
    rounds = 10 * len(edges) if rounds is None else rounds
    for _ in range(rounds):
        i, j = rng.sample(range(len(edges)), 2)
        (a, b), (c, d) = edges[i], edges[j]
        if rng.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4:
            continue
        e1, e2 = norm(a, c), norm(b, d)
        if e1 in present or e2 in present:
            continue
        present -= {edges[i], edges[j]}
        present |= {e1, e2}
        edges[i], edges[j] = e1, e2
    return SimpleGraph(g.n, frozenset(present))


def realize_random(degrees: list[int], rng: random.Random) -> SimpleGraph:
    """A random-ish simple graph with the given degrees (Havel-Hakimi, then edge swaps)."""
    order = list(range(len(degrees)))
    rng.shuffle(order)
    base = havel_hakimi([degrees[v] for v in order])
    relabeled = SimpleGraph.from_edges(len(degrees), [(order[a], order[b]) for a, b in base.edges])
    return shuffle_edges(relabeled, rng)


# -- families --------------------------------------------------------------------


def gnp(n: int, p, seed: int = 0) -> SimpleGraph:
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if p == 1 or rng.random() < p]
    return SimpleGraph.from_edges(n, edges)


def random_regular(n: int, r: int, seed: int = 0) -> SimpleGraph:
    """Pairing model with rejection of loops and parallel edges.

    Dense degrees go through the complement; after ``PAIRING_TRIES`` rejected
    pairings the sequence is realised deterministically and randomised by swaps.
    """
    if not 0 <= r < n or (n * r) % 2:
        raise ValueError(f"no {r}-regular graph on {n} vertices")
    rng = random.Random(seed)
    if 2 * r > n - 1:
        return complement(random_regular(n, n - 1 - r, rng.randrange(2**63)))
    for _ in range(PAIRING_TRIES):
        points = [v for v in range(n) for _ in range(r)]
        rng.shuffle(points)
        edges = set()
        ok = True
        for a, b in zip(points[::2], points[1::2]):
            e = norm(a, b)
            if a == b or e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return SimpleGraph(n, frozenset(edges))
    return realize_random([r] * n, rng)


def almost_regular(n: int, r: int, seed: int = 0) -> SimpleGraph:
    """One vertex of degree r + 1 and n - 1 vertices of degree r."""
    if not 1 <= r <= n - 2 or (n * r + 1) % 2:
        raise ValueError(f"no almost {r}-regular graph on {n} vertices")
    rng = random.Random(seed)
    degrees = [r] * n
    degrees[rng.randrange(n)] = r + 1
    return realize_random(degrees, rng)


def near_regular(n: int, d: int, t: int, seed: int = 0) -> SimpleGraph:
    """t vertices of degree d, the rest of degree d - 1, in random positions."""
    if not (n >= d + 1 >= 3 and 1 <= t <= n) or (t * d + (n - t) * (d - 1)) % 2:
        raise ValueError(f"no graph on {n} vertices with {t} of degree {d} and the rest {d - 1}")
    rng = random.Random(seed)
    degrees = [d] * t + [d - 1] * (n - t)
    rng.shuffle(degrees)
    return realize_random(degrees, rng)


def dirac(n: int, eps, seed: int = 0) -> SimpleGraph:
    """Random graph with minimum degree at least (1 + eps) n / 2, carved out of K_n."""
    eps = as_fraction(eps)
    need = _ceil((1 + eps) * n / 2)
    if need > n - 1:
        raise ValueError("eps too large: the degree target exceeds n - 1")
    rng = random.Random(seed)
    deg = [n - 1] * n
    edges = {(i, j) for i in range(n) for j in range(i + 1, n)}
    order = sorted(edges)
    rng.shuffle(order)
    for a, b in order:
        if deg[a] > need and deg[b] > need and rng.random() < 0.5:
            edges.discard((a, b))
            deg[a] -= 1
            deg[b] -= 1
    return SimpleGraph(n, frozenset(edges))


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def quasirandom_blowup(n: int, p, parts: int = 4, spread=Fraction(1, 10), seed: int = 0) -> SimpleGraph:
    """Blow up a random weighted template on ``parts`` vertices.

    Each pair of parts (and each part with itself) gets a density drawn from
    [p - spread, p + spread]; edges appear independently with that density.
    The result is only intended to be lower-(p, eps)-regular; certify it with
    ``expansion.is_lower_regular`` before relying on that.
    """
    p, spread = as_fraction(p), as_fraction(spread)
    if not 0 < p <= 1 or parts < 1:
        raise ValueError("need 0 < p <= 1 and at least one part")
    rng = random.Random(seed)
    part = [v * parts // n for v in range(n)]
    dens = {}
    for a in range(parts):
        for b in range(a, parts):
            lo, hi = max(p - spread, Fraction(0)), min(p + spread, Fraction(1))
            dens[(a, b)] = float(lo) + rng.random() * float(hi - lo)
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < dens[(min(part[i], part[j]), max(part[i], part[j]))]
    ]
    return SimpleGraph.from_edges(n, edges)


def counterexample_k3_gadget(n: int) -> SimpleGraph:
    """K_{n-3} and a disjoint K_3 whose vertices split the clique into three blocks.

    Every clique vertex gets exactly one triangle neighbour, so the maximum
    degree is n - 3 while the triangle is joined to the rest by n - 3 edges.
    """
    if n < 9:
        raise ValueError("the gadget needs n >= 9 so that triangle vertices stay below n - 3")
    k = n - 3
    tri = [k, k + 1, k + 2]
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges += [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])]
    for v in range(k):
        edges.append((v, tri[v * 3 // k]))
    return SimpleGraph.from_edges(n, edges)


def counterexample_three_blocks(n: int, eps, seed: int = 0) -> SimpleGraph:
    """G_1 (3k-regular) and G_2 (5k-regular) on n/2 - k vertices each, G_3 = K_{2k}, k = eps*n.

    G_1 is completely joined to G_2 and to G_3, giving delta = n/2 + k - 1
    (on G_3) and Delta = n/2 + 4k (on G_1 and G_2).
    """
    eps = as_fraction(eps)
    k = eps * n
    if n % 4 or k.denominator != 1 or int(k) % 2 or k <= 0:
        raise ValueError("need n/2 even and eps*n a positive even integer")
    k = int(k)
    half = n // 2 - k
    if 5 * k > half - 1:
        raise ValueError(f"a {5 * k}-regular block needs more than {half} vertices; increase n or lower eps")
    rng = random.Random(seed)
    g1 = random_regular(half, 3 * k, rng.randrange(2**63))
    g2 = random_regular(half, 5 * k, rng.randrange(2**63))
    b1, b2, b3 = range(0, half), range(half, 2 * half), range(2 * half, n)
    edges = list(g1.edges)
    edges += [(a + half, b + half) for a, b in g2.edges]
    edges += [(a, b) for a in b3 for b in b3 if a < b]
    edges += [(a, b) for a in b1 for b in b2]
    edges += [(a, b) for a in b1 for b in b3]
    return SimpleGraph.from_edges(n, edges)


def loop_entry(n: int, gap: int = 4, middle: int = 3, seed: int = 0) -> SimpleGraph:
    """A dense graph whose degree profile enters the path-peeling loop.

    One vertex of degree Delta - gap, ``middle`` vertices strictly between
    delta + 1 and Delta (one more when the degree sum would be odd), and
    everything else at Delta = n - 2, or n - 3 if that profile is not
    graphic. Degrees are realised randomly.
    """
    if gap < 3 or middle < 2 or middle + 2 > n:
        raise ValueError("need gap >= 3, at least two middle vertices and room for them")
    rng = random.Random(seed)
    for top in (n - 2, n - 3):
        low = top - gap
        if low < 1:
            continue
        mids = [rng.randint(low + 2, top - 1) if low + 2 <= top - 1 else None for _ in range(middle)]
        if None in mids:
            raise ValueError("gap too small for middle degrees strictly between delta + 1 and Delta")
        degrees = [low] + mids + [top] * (n - 1 - middle)
        if sum(degrees) % 2:
            if n - 1 - middle < 2:
                continue
            degrees[-1] -= 1  # one more middle vertex fixes the parity
        perm = list(range(n))
        rng.shuffle(perm)
        try:
            return realize_random([degrees[perm[v]] for v in range(n)], rng)
        except InfeasibleSequence:
            continue
    raise ValueError("could not realise a loop-entry degree profile")


FAMILIES: dict[str, Callable[..., SimpleGraph]] = {
    "gnp": lambda n, seed, p=Fraction(1, 2): gnp(n, p, seed),
    "random_regular": lambda n, seed, r=3: random_regular(n, int(r), seed),
    "almost_regular": lambda n, seed, r=3: almost_regular(n, int(r), seed),
    "near_regular": lambda n, seed, d=4, t=2: near_regular(n, int(d), int(t), seed),
    "dirac": lambda n, seed, eps=Fraction(1, 5): dirac(n, eps, seed),
    "quasirandom_blowup": lambda n, seed, p=Fraction(3, 5), parts=4, spread=Fraction(1, 10): quasirandom_blowup(
        n, p, int(parts), spread, seed
    ),
    "counterexample_k3_gadget": lambda n, seed: counterexample_k3_gadget(n),
    "counterexample_three_blocks": lambda n, seed, eps=Fraction(1, 14): counterexample_three_blocks(n, eps, seed),
    "loop_entry": lambda n, seed, gap=4, middle=3: loop_entry(n, int(gap), int(middle), seed),
    "complete": lambda n, seed: SimpleGraph.complete(n),
}


def generate(spec: GeneratorSpec) -> SimpleGraph:
    if spec.family not in FAMILIES:
        raise ValueError(f"unknown family {spec.family!r}; choose from {', '.join(sorted(FAMILIES))}")
    if spec.n < 1:
        raise ValueError("n must be positive")
    params = {k: (as_fraction(v) if isinstance(v, str) and "/" in v else v) for k, v in spec.params.items()}
    try:
        return FAMILIES[spec.family](spec.n, spec.seed, **params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {spec.family}: {exc}") from None


__all__ = [
    "FAMILIES",
    "GeneratorSpec",
    "almost_regular",
    "counterexample_k3_gadget",
    "counterexample_three_blocks",
    "derive_seed",
    "dirac",
    "generate",
    "gnp",
    "loop_entry",
    "near_regular",
    "quasirandom_blowup",
    "random_regular",
    "realize_random",
    "shuffle_edges",
]
