"""The label-expanded graph: one copy ``v_i`` of every vertex per label.

Every edge ``(u, v)`` of the base graph contributes the perfect matching
``u_i -- v_{p(i)}`` between the copies of its endpoints.  Copies are dense
integers ``v * s + (i - 1)``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .instance import Instance


class RegularityError(ValueError):
    pass


class AuxView:
    """Read-only navigation over the copies of the live vertices of an instance."""

    __slots__ = ("inst", "s", "n", "alive", "adj")

    def __init__(self, inst: Instance):
        self.inst = inst
        self.s = inst.graph.s
        self.n = inst.graph.n
        self.alive = inst.alive
        self.adj = inst.graph.aux_adj

    def base(self, a: int) -> int:
        return a // self.s

    def label(self, a: int) -> int:
        return a % self.s + 1

    def index(self, v: int, label: int) -> int:
        return v * self.s + label - 1

    def decode(self, a: int) -> tuple[int, int]:
        return a // self.s, a % self.s + 1

    def is_live(self, a: int) -> bool:
        return bool(self.alive[a // self.s])

    def is_forbidden(self, a: int) -> bool:
        """``a = u_i`` with ``i`` outside ``tau(u)``."""
        s = self.s
        return not (self.inst.tau[a // s] >> (a % s)) & 1

    def vertices(self) -> Iterable[int]:
        s = self.s
        for v in self.inst.vertices():
            yield from range(v * s, v * s + s)

    def edges(self) -> Iterable[tuple[int, int]]:
        for a in self.vertices():
            for b in self.neighbors(a):
                if a < b:
                    yield a, b

    def neighbors(self, a: int) -> list[int]:
        alive, s = self.alive, self.s
        return [b for b in self.adj[a] if alive[b // s]]


def aux_neighbors(view: AuxView, a: int) -> list[int]:
    return view.neighbors(a)


def lift_vertices(S: Iterable[int], s: int) -> set[int]:
    return {v * s + i for v in S for i in range(s)}


def project(S: Iterable[int], s: int) -> set[int]:
    return {a // s for a in S}


def is_regular(S: Iterable[int], s: int) -> bool:
    seen: set[int] = set()
    for a in S:
        v = a // s
        if v in seen:
            return False
        seen.add(v)
    return True


def _check_path(view: AuxView, P: Sequence[int]) -> None:
    if not P:
        raise RegularityError("empty path")
    if not is_regular(P, view.s):
        raise RegularityError("path is not regular")
    for a in P:
        if not view.is_live(a):
            raise RegularityError(f"copy {a} belongs to a removed vertex")
    for a, b in zip(P, P[1:]):
        if b not in view.adj[a]:
            raise RegularityError(f"{a} and {b} are not adjacent")


def replicate_regular_path(view: AuxView, P: Sequence[int]) -> list[list[int]]:
    """Split ``[V(P)]`` into ``s`` vertex-disjoint paths, one of them ``P``.

    Built edge by edge: each copy of the current endpoint's base is extended
    along the matching of the next base edge, so copy ``r`` of the path is the
    walk started at the ``r``-th label of the first vertex.  Result index ``r``
    holds the path starting at label ``r + 1``.
    """
    _check_path(view, P)
    s = view.s
    start = P[0] // s
    paths = [[start * s + r] for r in range(s)]
    for a, b in zip(P, P[1:]):
        w = b // s
        # the matching [e] restricted to copies of u, read off any copy's list
        pos = view.adj[a].index(b)
        for path in paths:
            tip = path[-1]
            nxt = view.adj[tip][pos]
            if nxt // s != w:
                raise RegularityError("adjacency lists of copies disagree")  # pragma: no cover
            path.append(nxt)
    return paths


def export_aux(inst: Instance) -> str:
    """Edge list of the expanded graph: ``aux <vertices> <edges>`` then ``a b`` lines."""
    view = AuxView(inst)
    verts = sum(1 for _ in view.vertices())
    edges = list(view.edges())
    lines = [f"aux {verts} {len(edges)}"]
    lines.extend(f"{a} {b}" for a, b in edges)
    return "\n".join(lines) + "\n"
