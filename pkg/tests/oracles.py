"""Slow, independent reference computations used only by the tests.

Nothing here touches the package's flow or chain code; the expanded graph is
rebuilt directly from the edge permutations.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterable, Optional

from nulc.instance import Instance, Permutation


def expanded_adjacency(inst: Instance) -> dict[int, set[int]]:
    s = inst.s
    adj: dict[int, set[int]] = {}
    for v in inst.vertices():
        for i in range(s):
            adj[v * s + i] = set()
    for u, v, p in inst.graph.edges:
        if not (inst.alive[u] and inst.alive[v]):
            continue
        for i in range(1, s + 1):
            a, b = u * s + i - 1, v * s + p(i) - 1
            adj[a].add(b)
            adj[b].add(a)
    return adj


def forbidden(inst: Instance, a: int) -> bool:
    s = inst.s
    return not (inst.tau[a // s] >> (a % s)) & 1


def reachable(adj: dict[int, set[int]], start: int, removed: Iterable[int] = (), stop=None) -> set[int]:
    """Vertices reachable from ``start`` avoiding ``removed``; ``stop`` vertices are reached but not expanded."""
    gone = set(removed)
    seen = {start}
    stack = [start]
    while stack:
        a = stack.pop()
        if stop is not None and a != start and stop(a):
            continue
        for b in adj[a]:
            if b not in seen and b not in gone:
                seen.add(b)
                stack.append(b)
    return seen


def separates(inst: Instance, adj, source: int, sep: Iterable[int]) -> bool:
    seen = reachable(adj, source, sep, stop=lambda a: forbidden(inst, a))
    return not any(forbidden(inst, a) for a in seen)


def cuttable(inst: Instance, adj, source: int) -> list[int]:
    """Copies that may appear in a separator and lie on some source-side search tree."""
    s = inst.s
    near = reachable(adj, source, stop=lambda a: forbidden(inst, a))
    return sorted(
        a for a in near
        if a != source and not forbidden(inst, a) and a // s not in inst.undeletable
    )


def all_min_separators(inst: Instance, source: int, limit: int) -> tuple[Optional[int], list[frozenset[int]]]:
    """(size, every minimum separator) by increasing-size enumeration; (None, []) above ``limit``."""
    adj = expanded_adjacency(inst)
    pool = cuttable(inst, adj, source)
    for size in range(0, min(limit, len(pool)) + 1):
        found = [frozenset(c) for c in itertools.combinations(pool, size) if separates(inst, adj, source, c)]
        if found:
            return size, found
    return None, []


def neighborhood(adj, Z: set[int]) -> set[int]:
    out = set()
    for a in Z:
        out |= adj[a]
    return out - Z


def components(adj, verts: set[int]) -> list[set[int]]:
    left = set(verts)
    out = []
    while left:
        r = left.pop()
        comp = {r}
        stack = [r]
        while stack:
            a = stack.pop()
            for b in adj[a]:
                if b in left:
                    left.discard(b)
                    comp.add(b)
                    stack.append(b)
        out.append(comp)
    return out


def bipartite_after(n: int, edges, removed: Iterable[int]) -> bool:
    gone = set(removed)
    nbrs: dict[int, list[int]] = {v: [] for v in range(n) if v not in gone}
    for u, v in edges:
        if u in nbrs and v in nbrs:
            nbrs[u].append(v)
            nbrs[v].append(u)
    col: dict[int, int] = {}
    for r in nbrs:
        if r in col:
            continue
        col[r] = 0
        stack = [r]
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in col:
                    col[y] = 1 - col[x]
                    stack.append(y)
                elif col[y] == col[x]:
                    return False
    return True


def min_oct(n: int, edges) -> int:
    for k in range(n + 1):
        if any(bipartite_after(n, edges, X) for X in itertools.combinations(range(n), k)):
            return k
    return n


def random_instance(rng: random.Random, n: int, s: int, p: float, p_full: float = 1.0, p_und: float = 0.0) -> Instance:
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            img = list(range(1, s + 1))
            rng.shuffle(img)
            edges.append((u, v, Permutation(tuple(img))))
    tau = {}
    for v in range(n):
        if rng.random() >= p_full:
            labels = [i for i in range(1, s + 1) if rng.random() < 0.6] or [rng.randint(1, s)]
            tau[v] = labels
    und = [v for v in range(n) if rng.random() < p_und]
    return Instance.build(n, s, 1, edges, tau=tau, undeletable=und)


def random_cut_query(rng: random.Random, max_ns: int = 24) -> tuple[Instance, int]:
    """Random instance with an anchored source copy that still reaches a forbidden copy."""
    while True:
        s = rng.randint(1, 3)
        n = rng.randint(3, max_ns // s)
        inst = random_instance(rng, n, s, rng.choice([0.25, 0.35, 0.5]), p_full=rng.choice([0.3, 0.6]), p_und=rng.choice([0.0, 0.15]))
        src_v = rng.randrange(n)
        alpha = rng.randint(1, s)
        tau = list(inst.tau)
        tau[src_v] = 1 << (alpha - 1)
        inst = Instance(inst.graph, 1, tuple(tau), inst.undeletable | {src_v}, src_v)
        source = src_v * s + alpha - 1
        adj = expanded_adjacency(inst)
        seen = reachable(adj, source, stop=lambda a: forbidden(inst, a))
        if any(forbidden(inst, a) for a in seen):
            return inst, source


def separator_exists(inst: Instance, source: int, size: int, extra_sinks=(), exclude=()) -> bool:
    """Is there a separator of at most ``size`` copies from ``source`` to the forbidden copies plus ``extra_sinks``?"""
    adj = expanded_adjacency(inst)
    sinks = set(extra_sinks)
    is_sink = lambda a: forbidden(inst, a) or a in sinks  # noqa: E731
    near = reachable(adj, source, stop=is_sink)
    banned = set(exclude)
    s = inst.s
    pool = sorted(
        a for a in near
        if a != source and not is_sink(a) and a // s not in inst.undeletable and a not in banned
    )
    for k in range(0, min(size, len(pool)) + 1):
        for c in itertools.combinations(pool, k):
            seen = reachable(adj, source, c, stop=is_sink)
            if not any(is_sink(a) for a in seen):
                return True
    return False
