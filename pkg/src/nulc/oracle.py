"""Exhaustive reference solver for small instances."""
from __future__ import annotations

import itertools
from typing import Optional

from .feasibility import feasible_labeling
from .instance import Instance, Solution, labels_of

MAX_N = 12
MAX_S = 4
MAX_ENUM_N = 8


class SizeLimitError(ValueError):
    def __init__(self, n: int, s: int):
        super().__init__(f"SIZE_LIMIT: oracle accepts n <= {MAX_N} and sigma <= {MAX_S}, got n={n} sigma={s}")


def brute_force(inst: Instance) -> Solution:
    """Smallest-first search over deletion sets, each checked by label propagation."""
    if inst.n > MAX_N or inst.s > MAX_S:
        raise SizeLimitError(inst.n, inst.s)
    live = list(inst.vertices())
    pool = [v for v in live if v not in inst.undeletable]
    for size in range(min(inst.k, len(pool)) + 1):
        for X in itertools.combinations(pool, size):
            sub = inst.evolve(kill=X)
            labeling = feasible_labeling(sub)
            if labeling is not None:
                return Solution(True, frozenset(X), labeling)
    return Solution.no()


def enumerate_labeling(inst: Instance) -> Optional[dict[int, int]]:
    """First labeling of the live graph, in lexicographic order, satisfying every constraint."""
    live = list(inst.vertices())
    if len(live) > MAX_ENUM_N:
        raise SizeLimitError(len(live), inst.s)
    g = inst.graph
    edges = [(u, v, p) for u, v, p in g.edges if inst.alive[u] and inst.alive[v]]
    choices = [labels_of(inst.tau[v]) for v in live]
    for combo in itertools.product(*choices):
        lab = dict(zip(live, combo))
        if all(p(lab[u]) == lab[v] for u, v, p in edges):
            return lab
    return None


def brute_force_enumerate(inst: Instance) -> Solution:
    """Same decision as :func:`brute_force` but with full labeling enumeration."""
    pool = [v for v in inst.vertices() if v not in inst.undeletable]
    for size in range(min(inst.k, len(pool)) + 1):
        for X in itertools.combinations(pool, size):
            lab = enumerate_labeling(inst.evolve(kill=X))
            if lab is not None:
                return Solution(True, frozenset(X), lab)
    return Solution.no()
