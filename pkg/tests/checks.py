"""Invariant checks shared by the unit and acceptance suites; each returns a list of violations."""
from __future__ import annotations

import random

from nulc.auxgraph import AuxView, is_regular, lift_vertices, project
from nulc.separators import (
    CutQuery,
    GoodBadPair,
    GoodClosestToT,
    NoGoodMinimum,
    NoSmallSeparator,
    classify_crux,
    max_disjoint_paths,
    separator_chain,
    two_paths,
)

from oracles import (
    all_min_separators,
    components,
    expanded_adjacency,
    neighborhood,
    random_instance,
    reachable,
    separator_exists,
)

ENUM_LIMIT = 6


def chain_violations(inst, source) -> tuple[list[str], bool]:
    """Violations of the chain invariants; second value is False when the query was skipped."""
    view = AuxView(inst)
    q = CutQuery(view, source, inst.n * inst.s)
    flow = max_disjoint_paths(view, q)
    if flow.exceeds_cap:
        return [], False
    size, seps = all_min_separators(inst, source, ENUM_LIMIT)
    if size is None:
        return [], False
    out = []
    if size != flow.value:
        return [f"menger: exhaustive {size} vs flow {flow.value}"], True
    chain = separator_chain(view, q, flow)
    adj = expanded_adjacency(inst)
    regs = chain.regions()
    if source not in regs[0]:
        out.append("source outside J_1")
    for i, (J, B) in enumerate(zip(regs, chain.boundaries)):
        if neighborhood(adj, J) != set(B):
            out.append(f"boundary {i} is not N(J_{i + 1})")
        if len(B) != size:
            out.append(f"boundary {i} has size {len(B)} != {size}")
        if reachable(adj, source, B) != J:
            out.append(f"J_{i + 1} is not the source side of its boundary")
        if i and not regs[i - 1] < J:
            out.append(f"J_{i} not strictly inside J_{i + 1}")
        if frozenset(B) not in seps:
            out.append(f"boundary {i} is not a minimum separator")
    union = set().union(*map(set, chain.boundaries))
    interior = set(regs[0])
    for i in range(1, len(regs)):
        interior |= regs[i] - (regs[i - 1] | set(chain.boundaries[i - 1]))
    for S in seps:
        if not S <= union:
            out.append(f"minimum separator {sorted(S)} escapes the chain")
        if S & interior:
            out.append(f"minimum separator {sorted(S)} meets J_1 or a gap between closures")
    return out, True


def crux_violations(inst, source) -> tuple[list[str], str]:
    view = AuxView(inst)
    s = inst.s
    cap = inst.n * s
    outcome, flow, chain = classify_crux(view, CutQuery(view, source, cap))
    name = type(outcome).__name__
    if isinstance(outcome, NoSmallSeparator):
        return [], name
    size, seps = all_min_separators(inst, source, ENUM_LIMIT)
    if size is None:
        return [], "skipped"
    adj = expanded_adjacency(inst)
    region = lambda S: reachable(adj, source, S)  # noqa: E731
    good = lambda S: is_regular(region(S) | set(S), s)  # noqa: E731
    out = []
    if isinstance(outcome, GoodClosestToT):
        S = frozenset(outcome.separator)
        if S not in seps:
            out.append("good separator is not minimum")
        if set(outcome.region) != region(S) or not good(S):
            out.append("closed region of the returned separator is irregular")
        if any(region(S) < region(T) for T in seps):
            out.append("another minimum separator covers the returned one")
    elif isinstance(outcome, NoGoodMinimum):
        if any(good(T) for T in seps):
            out.append("a good minimum separator exists")
        u, g1, g2 = outcome.witness
        closed = region(outcome.separator) | set(outcome.separator)
        if not {u * s + g1 - 1, u * s + g2 - 1} <= closed:
            out.append("witness copies not in the closed region")
    else:
        assert isinstance(outcome, GoodBadPair)
        S1, S2 = frozenset(outcome.good), frozenset(outcome.bad)
        R1, R2 = region(S1), region(S2)
        if S1 not in seps or S2 not in seps:
            out.append("pair members are not minimum separators")
        if not good(S1) or good(S2):
            out.append("pair is not good then bad")
        if not R1 < R2:
            out.append("bad separator does not cover the good one")
        if any(R1 < region(T) < R2 for T in seps):
            out.append("a minimum separator lies strictly between the pair")
        out += two_paths_violations(inst, view, source, outcome, size, R1, R2)
    return out, name


def two_paths_violations(inst, view, source, pair, size, R1, R2) -> list[str]:
    s = inst.s
    u, g, d = pair.witness
    targets = (u * s + g - 1, u * s + d - 1)
    S1, S2 = set(pair.good), set(pair.bad)
    out = []
    adj = expanded_adjacency(inst)
    for t, P in zip(targets, two_paths(view, source, pair.good, pair.bad, *targets)):
        if P[0] != source or P[-1] != t:
            out.append("path endpoints wrong")
        if any(b not in adj[a] for a, b in zip(P, P[1:])) or len(set(P)) != len(P):
            out.append("not a simple path")
        if set(P[1:-1]) & S2:
            out.append("path meets the bad separator internally")
        hits = set(P) & S1
        if len(hits) > 1:
            out.append("path meets the good separator twice")
        if t in R1 and hits:
            out.append("target inside the good region but path crosses it")
        avoid = (set(P) & (S1 | S2)) | (R1 - {source})
        if separator_exists(inst, source, size, extra_sinks=[t], exclude=avoid):
            out.append("a small separator avoids the path's separator vertices")
    return out


# -- expanded-graph structure (these assert rather than collect) -----------------


def random_regular_path(view: AuxView, rng: random.Random, length: int):
    s = view.s
    start = rng.randrange(view.n * s)
    path = [start]
    used = {start // s}
    for _ in range(length):
        nxt = [b for b in view.neighbors(path[-1]) if b // s not in used]
        if not nxt:
            break
        b = rng.choice(nxt)
        path.append(b)
        used.add(b // s)
    return path


def check_replicas(view, P, paths):
    s = view.s
    assert len(paths) == s
    flat = [a for p in paths for a in p]
    assert len(flat) == len(set(flat)), "paths share a vertex"
    assert set(flat) == lift_vertices(project(P, s), s)
    assert list(P) in [list(p) for p in paths]
    assert sorted(p[0] % s for p in paths) == list(range(s))
    assert sorted(p[-1] % s for p in paths) == list(range(s))
    for p in paths:
        assert all(b in view.neighbors(a) for a, b in zip(p, p[1:]))


def check_structure(inst):
    view = AuxView(inst)
    s = inst.s
    verts = list(view.vertices())
    edges = list(view.edges())
    assert len(verts) == inst.n * s
    assert len(edges) == inst.graph.m * s
    ref = expanded_adjacency(inst)
    for a in verts:
        assert set(view.neighbors(a)) == ref[a]
        assert len(view.neighbors(a)) == len(inst.graph.adj[a // s])
    for v in range(inst.n):
        for i in range(s):
            for j in range(i + 1, s):
                assert not (ref[v * s + i] & ref[v * s + j])
    for u, v, p in inst.graph.edges:  # each edge lifts to a perfect matching
        matched = {(a, b) for a in range(u * s, u * s + s) for b in ref[a] if b // s == v}
        assert len(matched) == s
        assert {a for a, _ in matched} == set(range(u * s, u * s + s))
        assert {b for _, b in matched} == set(range(v * s, v * s + s))


def grow_regular_set(adj, s, rng, size):
    start = rng.choice(sorted(adj))
    Z = {start}
    bases = {start // s}
    for _ in range(size - 1):
        frontier = sorted(b for a in Z for b in adj[a] if b not in Z and b // s not in bases)
        if not frontier:
            break
        b = rng.choice(frontier)
        Z.add(b)
        bases.add(b // s)
    return Z


def partial_symmetry_holds(adj, s, Z) -> bool:
    Y = neighborhood(adj, Z)
    Zp = lift_vertices(project(Z, s), s) - Z
    Yp = lift_vertices(project(Y, s), s) - Y
    NZp = neighborhood(adj, Zp)
    if not (Yp <= NZp <= lift_vertices(project(Y, s), s)):
        return False
    for C in components(adj, Zp):
        NC = neighborhood(adj, C)
        if not project(Y, s) <= project(NC, s):
            return False
    return True


def sample_symmetry_sets(seed, count):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        inst = random_instance(rng, rng.randint(3, 12), rng.randint(2, 4), rng.choice([0.25, 0.4, 0.6]))
        adj = expanded_adjacency(inst)
        Z = grow_regular_set(adj, inst.s, rng, rng.randint(1, 6))
        closed = Z | neighborhood(adj, Z)
        if is_regular(closed, inst.s):
            out.append((adj, inst.s, Z))
    return out
