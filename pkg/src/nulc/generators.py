"""Instance generators: reductions from classic problems plus random families.

Every generator is a pure function of its arguments; randomized ones take an
explicit seed and record their parameters as comment lines.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .instance import Graph, Instance, Permutation, full_mask, mask_of

SWAP = Permutation((2, 1))

Edges = list[tuple[int, int]]


class GeneratorError(ValueError):
    pass


# -- plain graphs -------------------------------------------------------------


def cycle(n: int) -> Edges:
    if n < 3:
        raise GeneratorError("a cycle needs at least 3 vertices")
    return [(i, (i + 1) % n) for i in range(n)]


def petersen() -> Edges:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return outer + spokes + inner


def complete(n: int) -> Edges:
    return list(itertools.combinations(range(n), 2))


def star(leaves: int) -> Edges:
    return [(0, i) for i in range(1, leaves + 1)]


def gnp(n: int, p: float, rng: random.Random) -> Edges:
    return [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]


def _params(**kw) -> tuple[str, ...]:
    return (" ".join(f"{k}={v}" for k, v in kw.items()),)


# -- reductions ---------------------------------------------------------------


def gen_oct(n: int, edges: Edges, k: int, comments: Sequence[str] = ()) -> Instance:
    """Odd cycle transversal: two labels, every edge swaps them."""
    return Instance.build(n, 2, k, [(u, v, SWAP) for u, v in edges], comments=comments)


def gen_group_fvs(n: int, edges: Sequence[tuple[int, int, int]], r: int, k: int, comments: Sequence[str] = ()) -> Instance:
    """Group feedback vertex set over Z_r: an edge with group element g shifts labels by g."""
    return Instance.build(n, r, k, [(u, v, Permutation.shift(r, g)) for u, v, g in edges], comments=comments)


def gen_multiway_cut(
    n: int, edges: Edges, terminals: Sequence[int], k: int, s: Optional[int] = None, comments: Sequence[str] = ()
) -> Instance:
    """Vertex multiway cut: identity edges, terminal ``i`` pinned to label ``i + 1``."""
    r = len(terminals)
    s = r if s is None else s
    if r > s:
        raise GeneratorError(f"{r} terminals need at least {r} labels")
    if len(set(terminals)) != r:
        raise GeneratorError("terminals must be distinct")
    tset = set(terminals)
    for u, v in edges:
        if u in tset and v in tset:
            raise GeneratorError(f"terminals {u + 1} and {v + 1} are adjacent; no vertex cut separates them")
    ident = Permutation.identity(s)
    tau = {t: [i + 1] for i, t in enumerate(terminals)}
    return Instance.build(n, s, k, [(u, v, ident) for u, v in edges], tau=tau, undeletable=terminals, comments=comments)


# -- random families ----------------------------------------------------------


@dataclass(frozen=True)
class GenSpec:
    family: str = "random"  # random | oct | group-fvs | multiway
    n: int = 8
    p: float = 0.3
    s: int = 2
    k: int = 1
    seed: int = 0
    planted: bool = False
    p_full: float = 0.5
    p_undeletable: float = 0.0
    terminals: int = 3
    extra: dict = field(default_factory=dict)


def _random_perm(s: int, rng: random.Random) -> Permutation:
    img = list(range(1, s + 1))
    rng.shuffle(img)
    return Permutation(tuple(img))


def _perm_sending(s: int, a: int, b: int, rng: random.Random) -> Permutation:
    """Uniform permutation among those mapping label ``a`` to ``b``."""
    img = list(range(1, s + 1))
    rng.shuffle(img)
    j = img.index(b)
    img[a - 1], img[j] = img[j], img[a - 1]
    return Permutation(tuple(img))


def _random_subset(s: int, rng: random.Random, must: Optional[int] = None) -> list[int]:
    while True:
        labels = [i for i in range(1, s + 1) if rng.random() < 0.5]
        if must is not None and must not in labels:
            labels.append(must)
        if labels:
            return sorted(labels)


def gen_random(spec: GenSpec) -> Instance:
    """G(n, p) with uniform permutations; planted mode keeps a hidden solution valid."""
    rng = random.Random(spec.seed)
    n, s, k = spec.n, spec.s, spec.k
    comments = _params(**{key: val for key, val in asdict(spec).items() if key not in ("extra", "terminals")})
    hidden: set[int] = set()
    psi: dict[int, int] = {}
    if spec.planted:
        hidden = set(rng.sample(range(n), min(k, n)))
        psi = {v: rng.randint(1, s) for v in range(n) if v not in hidden}
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() >= spec.p:
            continue
        if u in psi and v in psi:
            edges.append((u, v, _perm_sending(s, psi[u], psi[v], rng)))
        else:
            edges.append((u, v, _random_perm(s, rng)))
    tau = {}
    for v in range(n):
        if rng.random() >= spec.p_full:
            tau[v] = _random_subset(s, rng, psi.get(v))
    und = [v for v in range(n) if v not in hidden and rng.random() < spec.p_undeletable]
    return Instance.build(n, s, k, edges, tau=tau, undeletable=und, comments=comments)


def gen_random_group_fvs(n: int, p: float, r: int, k: int, seed: int) -> Instance:
    rng = random.Random(seed)
    edges = [(u, v, rng.randrange(r)) for u, v in gnp(n, p, rng)]
    return gen_group_fvs(n, edges, r, k, _params(family="group-fvs", n=n, p=p, r=r, k=k, seed=seed))


def gen_random_multiway(n: int, p: float, r: int, k: int, seed: int) -> Instance:
    """Random graph with ``r`` pairwise non-adjacent terminals (edges between terminals dropped)."""
    rng = random.Random(seed)
    terminals = sorted(rng.sample(range(n), r))
    tset = set(terminals)
    edges = [(u, v) for u, v in gnp(n, p, rng) if not (u in tset and v in tset)]
    return gen_multiway_cut(n, edges, terminals, k, comments=_params(family="multiway", n=n, p=p, r=r, k=k, seed=seed))


def gen_random_oct(n: int, p: float, k: int, seed: int) -> Instance:
    rng = random.Random(seed)
    return gen_oct(n, gnp(n, p, rng), k, _params(family="oct", n=n, p=p, k=k, seed=seed))


def _planted_oct(n: int, m: int, k: int, rng: random.Random) -> tuple[Edges, list[int], dict[int, int]]:
    """Edges, hidden vertices and the two-colouring of the rest."""
    hidden = rng.sample(range(n), k)
    hset = set(hidden)
    side = {v: rng.randrange(2) for v in range(n) if v not in hset}
    rest = [v for v in range(n) if v not in hset]
    left = [v for v in rest if side[v] == 0]
    right = [v for v in rest if side[v] == 1]
    if not left or not right:
        raise GeneratorError("planted bipartition is degenerate; use a larger n")
    seen: set[tuple[int, int]] = set()
    edges: Edges = []

    def add(u: int, v: int) -> None:
        e = (min(u, v), max(u, v))
        if u != v and e not in seen:
            seen.add(e)
            edges.append(e)

    # spanning path alternating sides keeps one big component
    order = rest[:]
    rng.shuffle(order)
    lq = [v for v in order if side[v] == 0]
    rq = [v for v in order if side[v] == 1]
    chain = [x for pair in itertools.zip_longest(lq, rq) for x in pair if x is not None]
    for a, b in zip(chain, chain[1:]):
        if side[a] != side[b]:
            add(a, b)
        else:
            add(a, rng.choice(right if side[a] == 0 else left))
    for h in hidden:
        for _ in range(3):
            add(h, rng.choice(left))
            add(h, rng.choice(right))
    budget = 0
    while len(edges) < m and budget < 20 * m:
        budget += 1
        add(rng.choice(left), rng.choice(right))
    return edges, hidden, side


def planted_oct_edges(n: int, m: int, k: int, rng: random.Random) -> Edges:
    """About ``m`` edges on ``n`` vertices that become bipartite after deleting ``k`` hidden vertices.

    Each hidden vertex closes an odd cycle, so the budget is actually needed.
    """
    return _planted_oct(n, m, k, rng)[0]


def gen_planted_oct(n: int, m: int, k: int, seed: int) -> Instance:
    rng = random.Random(seed)
    edges = planted_oct_edges(n, m, k, rng)
    return gen_oct(n, edges, k, _params(family="oct-planted", n=n, m=m, k=k, seed=seed))


def gen_padded_oct(n: int, k: int, seed: int, core: int = 64, density: float = 2.0) -> Instance:
    """Planted OCT instance whose first ``core`` vertices and their edges do not depend on ``n``.

    The core is a planted instance on ``core`` vertices holding every hidden
    vertex; the remaining vertices form a random bipartite padding that agrees
    with the core's colouring and is wired to its non-hidden vertices.  Sizes
    built from one seed share the core, so the solver meets the same odd
    cycles at every size and only the amount of graph to traverse grows.
    """
    if n < core:
        raise GeneratorError(f"n={n} is smaller than the core ({core})")
    rng = random.Random(seed)
    edges, hidden, side = _planted_oct(core, int(density * core), k, rng)
    pad = random.Random(seed ^ 0x9E3779B97F4A7C15)
    side.update({v: pad.randrange(2) for v in range(core, n)})
    groups = ([v for v in side if side[v] == 0], [v for v in side if side[v] == 1])
    seen = set(edges)

    def add(u: int, v: int) -> None:
        e = (min(u, v), max(u, v))
        if u != v and e not in seen:
            seen.add(e)
            edges.append(e)

    for v in range(core, n):  # attach each padding vertex to an earlier vertex of the other side
        other = groups[1 - side[v]]
        while True:
            u = pad.choice(other)
            if u < v:
                add(u, v)
                break
    target = int(density * n)
    budget = 0
    while len(edges) < target and budget < 20 * target:  # every extra edge touches the padding
        budget += 1
        v = pad.randrange(core, n)
        add(v, pad.choice(groups[1 - side[v]]))
    return gen_oct(n, edges, k, _params(family="oct-padded", n=n, k=k, seed=seed, core=core))


def mixed_family(seed: int, n_max: int = 8, m_max: int = 14, s_max: int = 3, k_max: int = 2) -> Instance:
    """One small instance from a family and size drawn by ``seed``."""
    rng = random.Random(seed)
    n = rng.randint(min(4, n_max), n_max)
    k = rng.randint(0, k_max)
    fam = rng.choice(["random", "random", "planted", "oct", "group-fvs", "multiway"])
    p = rng.choice([0.2, 0.35, 0.5, 0.7])
    sub = rng.getrandbits(63)
    if fam == "oct":
        inst = gen_random_oct(n, p, k, sub)
    elif fam == "group-fvs":
        inst = gen_random_group_fvs(n, p, rng.randint(2, s_max), k, sub)
    elif fam == "multiway" and n >= 3:
        inst = gen_random_multiway(n, p, rng.randint(2, min(3, s_max)), k, sub)
    else:
        spec = GenSpec(
            "random", n, p, rng.randint(1, s_max), k, sub,
            planted=fam == "planted", p_full=rng.choice([0.3, 0.6, 1.0]),
            p_undeletable=rng.choice([0.0, 0.0, 0.2]),
        )
        inst = gen_random(spec)
    if inst.graph.m > m_max:
        keep = sorted(random.Random(sub ^ 1).sample(range(inst.graph.m), m_max))
        g = inst.graph
        edges = [g.edges[i] for i in keep]
        inst = Instance(Graph(g.n, g.s, edges), inst.k, inst.tau, inst.undeletable, comments=inst.comments)
    return inst


__all__ = [
    "GenSpec", "GeneratorError", "cycle", "petersen", "complete", "star", "gnp",
    "gen_oct", "gen_group_fvs", "gen_multiway_cut", "gen_random", "gen_random_oct",
    "gen_random_group_fvs", "gen_random_multiway", "gen_planted_oct", "gen_padded_oct", "planted_oct_edges",
    "mixed_family", "full_mask", "mask_of",
]
