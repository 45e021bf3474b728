"""Bounded search tree for Node Unique Label Cover.

A node is dispatched in a fixed order: forced deletions, removal of
components that already admit a labeling, the budget check, anchoring (B0),
and finally the separator classification which selects one of B1, B2, B3.
Children are explored depth-first in the order each rule lists them.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .auxgraph import AuxView
from .feasibility import component_feasible
from .instance import Graph, Instance, Permutation, Solution, full_mask, labels_of
from .separators import (
    CutQuery,
    GoodBadPair,
    GoodClosestToT,
    NoGoodMinimum,
    NoSmallSeparator,
    classify_crux,
    max_disjoint_paths,
    two_paths,
)

log = logging.getLogger(__name__)
trace = logging.getLogger(__name__ + ".trace")


class MeasureError(AssertionError):
    """A child failed to decrease the measure of its parent."""


@dataclass
class BranchNode:
    inst: Instance
    deleted: frozenset[int] = frozenset()
    labels: dict[int, int] = field(default_factory=dict)  # from components already removed
    depth: int = 0
    mu: Optional[int] = None  # filled in when the node branches
    parent_mu: Optional[int] = None
    rule: str = "root"


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    max_depth: int = 0
    rule_counts: dict[str, int] = field(default_factory=lambda: {"B0": 0, "B1": 0, "B2": 0, "B3": 0})
    wall_time: float = 0.0
    measure_checks: int = 0
    anchor_resets: int = 0


@dataclass(frozen=True)
class LeafYes:
    node: BranchNode


@dataclass(frozen=True)
class LeafNo:
    reason: str


StepResult = Union[list[BranchNode], LeafYes, LeafNo]


def anchor_copy(inst: Instance) -> int:
    v = inst.anchor
    assert v is not None
    (alpha,) = labels_of(inst.tau[v])
    return v * inst.s + alpha - 1


def cut_query(inst: Instance, cap: int) -> tuple[AuxView, CutQuery]:
    view = AuxView(inst)
    return view, CutQuery(view, anchor_copy(inst), cap)


def anchor_cut_value(inst: Instance, cap: int) -> int:
    """Anchor-to-sink cut value, exact up to ``cap``; ``cap + 1`` means larger."""
    if inst.anchor is None:
        return 0
    if cap < 0:
        return 0
    view, q = cut_query(inst, cap)
    return max_disjoint_paths(view, q).value


def measure_bound(inst: Instance) -> int:
    return (inst.s + 1) * inst.k


class Solver:
    def __init__(self, assert_measure: bool = False):
        self.assert_measure = assert_measure
        self.stats = SearchStats()

    # -- measure --------------------------------------------------------

    def check_child(self, parent_mu: int, child: BranchNode) -> None:
        """``mu(child) < parent_mu``, computing the child's cut only as far as needed."""
        inst = child.inst
        need = measure_bound(inst) - parent_mu + 1  # smallest lambda that suffices
        self.stats.measure_checks += 1
        got = anchor_cut_value(inst, need) if need > 0 else 0
        if need > 0 and got < need:
            raise MeasureError(
                f"{child.rule} child: mu={measure_bound(inst) - got} not below parent mu={parent_mu}"
            )

    # -- node dispatch --------------------------------------------------

    def step(self, node: BranchNode) -> StepResult:
        inst = node.inst
        deleted = set(node.deleted)
        labels = dict(node.labels)
        while True:
            # (1) forced deletions
            empty = [v for v in inst.vertices() if inst.tau[v] == 0]
            if empty:
                if any(v in inst.undeletable for v in empty):
                    return LeafNo("empty label set on an undeletable vertex")
                if len(empty) > inst.k:
                    return LeafNo("forced deletions exceed the budget")
                inst = inst.evolve(k=inst.k - len(empty), kill=empty)
                deleted.update(empty)
            # (2) drop components that already admit a labeling
            view = AuxView(inst)
            infeasible = []
            drop = []
            for comp in inst.components():
                res = component_feasible(inst, comp, view)
                if res.labeling is None:
                    infeasible.append(comp)
                else:
                    labels.update(res.labeling)
                    drop.extend(comp)
            if drop:
                if inst.anchor is not None and inst.anchor in drop:
                    self.stats.anchor_resets += 1
                inst = inst.evolve(kill=drop)
            if not infeasible:
                return LeafYes(BranchNode(inst, frozenset(deleted), labels, node.depth))
            # (3) budget
            if inst.k == 0:
                return LeafNo("budget exhausted")
            node = BranchNode(inst, frozenset(deleted), labels, node.depth, None, node.parent_mu, node.rule)
            # (4) no anchor: B0
            if inst.anchor is None:
                comp = infeasible[0]
                cand = [v for v in comp if v not in inst.undeletable]
                if not cand:
                    return LeafNo("infeasible component without deletable vertices")
                return self.branch_b0(node, cand[0])
            # (5) anchor already cut off from every forbidden copy
            view, q = cut_query(inst, inst.s * inst.k)
            if not _reaches_sink(view, q.source):
                self.stats.anchor_resets += 1
                comp = next(c for c in inst.components() if inst.anchor in c)
                res = component_feasible(inst, comp, view)
                assert res.labeling is not None
                labels.update(res.labeling)
                inst = inst.evolve(kill=comp)
                continue
            # (6) classify the minimum separators
            outcome, flow, _ = classify_crux(view, q)
            if isinstance(outcome, NoSmallSeparator):
                return LeafNo("no small separator")
            assert flow.value >= 1
            node.mu = measure_bound(inst) - flow.value
            assert 0 <= node.mu <= measure_bound(inst)
            if isinstance(outcome, GoodClosestToT):
                return self.branch_b1(node, outcome.separator, outcome.region)
            if isinstance(outcome, NoGoodMinimum):
                return self.branch_b2(node, *outcome.witness)
            assert isinstance(outcome, GoodBadPair)
            return self.branch_b3(node, view, q.source, outcome)

    # -- child construction -------------------------------------------------

    def _child(self, node: BranchNode, rule: str, inst: Instance, extra_deleted=()) -> BranchNode:
        deleted = node.deleted | frozenset(extra_deleted) if extra_deleted else node.deleted
        return BranchNode(inst, deleted, node.labels, node.depth + 1, None, node.mu, rule)

    def _delete(self, node: BranchNode, rule: str, v: int) -> BranchNode:
        inst = node.inst
        return self._child(node, rule, inst.evolve(k=inst.k - 1, kill=[v]), [v])

    def _emit(self, node: BranchNode, rule: str, children: list[BranchNode]) -> list[BranchNode]:
        self.stats.rule_counts[rule] += 1
        trace.debug("depth=%d %s k=%d mu=%s -> %d children", node.depth, rule, node.inst.k, node.mu, len(children))
        if self.assert_measure:
            parent_mu = node.mu if node.mu is not None else measure_bound(node.inst)
            for c in children:
                self.check_child(parent_mu, c)
        return children

    def branch_b0(self, node: BranchNode, v: int) -> list[BranchNode]:
        inst = node.inst
        node.mu = measure_bound(inst)
        children = [self._delete(node, "B0", v)]
        for q in labels_of(inst.tau[v]):
            pinned = inst.evolve(tau={v: 1 << (q - 1)}, undeletable=[v], anchor=v)
            children.append(self._child(node, "B0", pinned))
        return self._emit(node, "B0", children)

    @staticmethod
    def fix_region(inst: Instance, copies) -> Instance:
        """Pin every base vertex of a regular region to the label of its copy."""
        s = inst.s
        tau = {a // s: 1 << (a % s) for a in copies}
        assert len(tau) == len(copies), "region is not regular"
        return inst.evolve(tau=tau, undeletable=tau.keys())

    def branch_b1(self, node: BranchNode, sep: list[int], reg: list[int]) -> list[BranchNode]:
        fixed = self.fix_region(node.inst, reg)
        x, d = divmod(min(sep), fixed.s)
        node_fixed = BranchNode(fixed, node.deleted, node.labels, node.depth, node.mu, node.parent_mu, node.rule)
        children = [
            self._delete(node_fixed, "B1", x),
            self._child(node_fixed, "B1", fixed.evolve(tau={x: 1 << d}, undeletable=[x])),
        ]
        return self._emit(node, "B1", children)

    def _restrict(self, inst: Instance, u: int, label: int, extra_fixed: Instance | None = None) -> Instance:
        base = extra_fixed or inst
        return base.evolve(tau={u: base.tau[u] & ~(1 << (label - 1))}, undeletable=[u])

    def branch_b2(self, node: BranchNode, u: int, g1: int, g2: int) -> list[BranchNode]:
        inst = node.inst
        children = []
        if u not in inst.undeletable:
            children.append(self._delete(node, "B2", u))
        children.append(self._child(node, "B2", self._restrict(inst, u, g1)))
        children.append(self._child(node, "B2", self._restrict(inst, u, g2)))
        return self._emit(node, "B2", children)

    def branch_b3(self, node: BranchNode, view: AuxView, source: int, pair: GoodBadPair) -> list[BranchNode]:
        inst = node.inst
        s = inst.s
        u, g, d = pair.witness
        p1, p2 = two_paths(view, source, pair.good, pair.bad, u * s + g - 1, u * s + d - 1)
        good = set(pair.good)
        hits = []
        for p in (p1, p2):
            on = [a for a in p if a in good]
            assert len(on) <= 1
            hits.append(on[0] // s if on else None)
        x1, x2 = hits
        children = []
        seen: set[int] = set()
        for x in (x1, x2, u):
            if x is None or x in seen or x in inst.undeletable:
                continue
            seen.add(x)
            children.append(self._delete(node, "B3", x))
        fixed = self.fix_region(inst, pair.good_region)
        for x, label in ((x1, g), (x2, d)):
            base = fixed.evolve(undeletable=[x]) if x is not None else fixed
            children.append(self._child(node, "B3", self._restrict(inst, u, label, base)))
        return self._emit(node, "B3", children)

    # -- driver ----------------------------------------------------------

    def run(self, root: Instance) -> tuple[Optional[BranchNode], SearchStats]:
        start = time.perf_counter()
        stack = [BranchNode(root)]
        found = None
        while stack:
            node = stack.pop()
            self.stats.nodes_expanded += 1
            if node.depth > self.stats.max_depth:
                self.stats.max_depth = node.depth
            res = self.step(node)
            if isinstance(res, LeafYes):
                found = res.node
                break
            if isinstance(res, LeafNo):
                continue
            stack.extend(reversed(res))
        self.stats.wall_time = time.perf_counter() - start
        return found, self.stats


def _reaches_sink(view: AuxView, source: int) -> bool:
    alive, s, adj, tau = view.alive, view.s, view.adj, view.inst.tau
    seen = {source}
    queue = [source]
    for a in queue:
        for b in adj[a]:
            w = b // s
            if not alive[w] or b in seen:
                continue
            if not (tau[w] >> (b - w * s)) & 1:
                return True
            seen.add(b)
            queue.append(b)
    return False


def split_partial_labels(inst: Instance) -> tuple[Instance, int]:
    """Give every deletable vertex with a restricted label set a pinned twin.

    A deletable ``v`` with ``tau(v)`` not full gets ``tau(v) = all labels`` plus a
    new undeletable neighbour ``v'`` joined by an identity edge and carrying
    the old ``tau(v)``.  Solutions correspond one to one (``v'`` is never deleted
    and copies the label of ``v`` when ``v`` survives), and afterwards every
    forbidden copy belongs to an undeletable vertex, so deleting a vertex never
    removes a sink.  Returns the new instance and the original vertex count.
    """
    n, s = inst.n, inst.s
    fm = full_mask(s)
    partial = [v for v in inst.vertices() if v not in inst.undeletable and inst.tau[v] != fm]
    if not partial:
        return inst, n
    g = inst.graph
    edges = list(g.edges)
    tau = list(inst.tau)
    alive = bytearray(inst.alive)
    und = set(inst.undeletable)
    ident = Permutation.identity(s)
    for i, v in enumerate(partial):
        twin = n + i
        edges.append((v, twin, ident))
        tau.append(inst.tau[v])
        tau[v] = fm
        alive.append(1)
        und.add(twin)
    graph = Graph(n + len(partial), s, edges)
    out = Instance(graph, inst.k, tuple(tau), frozenset(und), inst.anchor, bytes(alive), inst.comments)
    return out, n


def solve(inst: Instance, assert_measure: bool = False) -> tuple[Solution, SearchStats]:
    solver = Solver(assert_measure=assert_measure)
    n = inst.n
    work, _ = split_partial_labels(inst)
    found, stats = solver.run(work)
    if found is None:
        return Solution.no(), stats
    deleted = sorted(found.deleted)
    assert all(v < n for v in deleted)
    labeling = {v: lab for v, lab in found.labels.items() if v < n and inst.alive[v]}
    return Solution(True, frozenset(deleted), labeling), stats
