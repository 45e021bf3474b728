"""Minimum vertex separators in the expanded graph.

Cut queries separate one source copy from the implicit sink set ``T`` of all
forbidden copies ``u_i`` (``i`` not in ``tau(u)``).  Copies of undeletable
vertices and the source itself can never be cut.

Flow is routed through the usual vertex-split network: copy ``a`` becomes
``in(a) = 2a`` and ``out(a) = 2a + 1`` joined by an arc of capacity one
(unbounded for uncuttable copies), every expanded edge becomes two unbounded
arcs ``out -> in``, and every forbidden copy is merged into a single super sink.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .auxgraph import AuxView

log = logging.getLogger(__name__)

UNVISITED = -2


class Side(enum.Enum):
    SOURCE = "source"
    SINK = "sink"


@dataclass
class CutQuery:
    view: AuxView
    source: int
    cap: int

    def __post_init__(self) -> None:
        if self.view.is_forbidden(self.source):
            raise ValueError("source copy lies in the sink set")

    def is_sink(self, a: int) -> bool:
        return self.view.is_forbidden(a)

    def is_blocked(self, a: int) -> bool:
        return a == self.source or a // self.view.s in self.view.inst.undeletable


DEAD, ALLOWED, FORBIDDEN = 0, 1, 2


def copy_states(view: AuxView) -> bytearray:
    """Per copy: DEAD (base vertex removed), ALLOWED, or FORBIDDEN (label outside tau)."""
    s, alive, tau = view.s, view.alive, view.inst.tau
    out = bytearray(view.n * s)
    for v in range(view.n):
        if alive[v]:
            m = tau[v]
            for i in range(s):
                out[v * s + i] = ALLOWED if (m >> i) & 1 else FORBIDDEN
    return out


class FlowState:
    """Integral flow from the source copy to the sink set plus its residual graph."""

    def __init__(self, q: CutQuery):
        view = q.view
        self.query = q
        self.view = view
        self.s = view.s
        self.source = q.source
        self.size = view.n * view.s
        self.value = 0
        self.exceeds_cap = False
        self.through = [0] * self.size  # flow on in(a) -> out(a)
        self.into: dict[int, dict[int, int]] = {}  # b -> {a: flow on out(a) -> in(b)}
        self.outof: dict[int, dict[int, int]] = {}  # a -> {b: same}
        self.reach: Optional[list[int]] = None  # residual reach of the source, as visited nodes
        self._und = view.inst.undeletable
        self._tau = view.inst.tau
        self.state = copy_states(view)

    # -- residual graph ------------------------------------------------

    def _forbidden(self, b: int) -> bool:
        s = self.s
        return not (self._tau[b // s] >> (b % s)) & 1

    def _blocked(self, a: int) -> bool:
        return a == self.source or a // self.s in self._und

    def successors(self, x: int) -> list[int]:
        """Residual out-neighbours of split node ``x``; ``-(t + 1)`` means sink via copy ``t``."""
        a = x >> 1
        out: list[int] = []
        if x & 1:
            if a != self.source and self.through[a] > 0:
                out.append(x - 1)
            state, src = self.state, self.source
            for b in self.view.adj[a]:
                st = state[b]
                if st == FORBIDDEN:
                    out.append(-b - 1)
                elif st == ALLOWED and b != src:
                    out.append(2 * b)
        else:
            if self.through[a] == 0 or self._blocked(a):
                out.append(x + 1)
            d = self.into.get(a)
            if d:
                src = self.source
                for c, f in d.items():
                    if f > 0 and c != src:
                        out.append(2 * c + 1)
        return out

    def predecessors(self, y: int) -> list[int]:
        """Residual in-neighbours of split node ``y``."""
        state = self.state
        out: list[int] = []
        b = y >> 1
        if y & 1 == 0:
            for a in self.view.adj[b]:
                if state[a] == ALLOWED:
                    out.append(2 * a + 1)
            if b != self.source and self.through[b] > 0:
                out.append(y + 1)
        else:
            if b != self.source and (self.through[b] == 0 or self._blocked(b)):
                out.append(y - 1)
            d = self.outof.get(b)
            if d:
                for c, f in d.items():
                    if f > 0 and state[c] == ALLOWED:
                        out.append(2 * c)
        return out

    def _add_arc(self, a: int, b: int, delta: int) -> None:
        d = self.into.setdefault(b, {})
        d[a] = d.get(a, 0) + delta
        e = self.outof.setdefault(a, {})
        e[b] = e.get(b, 0) + delta

    # -- augmentation --------------------------------------------------

    def _bfs(self) -> Optional[tuple[list[int], int, int]]:
        """One residual BFS; returns (parents, last out-node, sink copy) or None.

        Same arcs as :meth:`successors`, expanded inline for speed.
        """
        parent = [UNVISITED] * (2 * self.size)
        src = self.source
        start = 2 * src + 1
        parent[start] = -1
        queue = [start]
        adj, state, through, into = self.view.adj, self.state, self.through, self.into
        und, s = self._und, self.s
        for x in queue:
            a = x >> 1
            if x & 1:
                if a != src and through[a] > 0 and parent[x - 1] == UNVISITED:
                    parent[x - 1] = x
                    queue.append(x - 1)
                for b in adj[a]:
                    st = state[b]
                    if st == ALLOWED:
                        y = 2 * b
                        if parent[y] == UNVISITED and b != src:
                            parent[y] = x
                            queue.append(y)
                    elif st == FORBIDDEN:
                        return parent, x, b
            else:
                if (through[a] == 0 or a // s in und) and parent[x + 1] == UNVISITED:
                    parent[x + 1] = x
                    queue.append(x + 1)
                d = into.get(a)
                if d:
                    for c, f in d.items():
                        y = 2 * c + 1
                        if f > 0 and c != src and parent[y] == UNVISITED:
                            parent[y] = x
                            queue.append(y)
        self.reach = parent
        return None

    def _augment(self, parent: list[int], last: int, t: int) -> None:
        self._add_arc(last >> 1, t, 1)
        y = last
        p = parent[y]
        while p != -1:
            a, c = p >> 1, y >> 1
            if a == c:
                self.through[a] += 1 if (p & 1) == 0 else -1
            elif p & 1:
                self._add_arc(a, c, 1)
            else:
                self._add_arc(c, a, -1)
            y = p
            p = parent[y]
        self.value += 1

    def run(self) -> "FlowState":
        cap = self.query.cap
        while True:
            found = self._bfs()
            if found is None:
                return self
            if self.value == cap:
                self.exceeds_cap = True
                self.value = cap + 1
                return self
            self._augment(*found)

    # -- cuts -----------------------------------------------------------

    def source_reach(self) -> bytearray:
        assert self.reach is not None and not self.exceeds_cap
        return bytearray(p != UNVISITED for p in self.reach)

    def sink_coreach(self) -> bytearray:
        """Split nodes that can reach the sink in the residual graph."""
        state, adj = self.state, self.view.adj
        mark = bytearray(2 * self.size)
        queue: list[int] = []
        for t, st in enumerate(state):
            if st != FORBIDDEN:
                continue
            for a in adj[t]:
                if state[a] == ALLOWED:
                    x = 2 * a + 1
                    if not mark[x]:
                        mark[x] = 1
                        queue.append(x)
        pred = self.predecessors
        for y in queue:
            for x in pred(y):
                if not mark[x]:
                    mark[x] = 1
                    queue.append(x)
        return mark


def max_disjoint_paths(view: AuxView, q: CutQuery) -> FlowState:
    """Maximum number of source-to-sink paths sharing only uncuttable copies.

    Stops after ``q.cap + 1`` augmentations; then ``exceeds_cap`` is set.
    """
    if q.view is not view:
        q = CutQuery(view, q.source, q.cap)
    return FlowState(q).run()


def _cut_of(flow: FlowState, inside: bytearray) -> list[int]:
    cut = []
    for a in range(flow.size):
        if inside[2 * a] and not inside[2 * a + 1]:
            cut.append(a)
    return cut


def region(view: AuxView, source: int, separator: Iterable[int]) -> list[int]:
    """``R(source, S)``: copies reachable from the source once ``S`` is removed."""
    alive, s, adj = view.alive, view.s, view.adj
    seen = bytearray(view.n * s)
    for a in separator:
        seen[a] = 1
    seen[source] = 1
    out = [source]
    for a in out:
        for b in adj[a]:
            if not seen[b] and alive[b // s]:
                seen[b] = 1
                out.append(b)
    return out


def closest_min_separator(flow: FlowState, side: Side) -> list[int]:
    if flow.exceeds_cap or flow.value < 1:
        raise ValueError("closest separator needs a finite flow of value >= 1")
    if side is Side.SOURCE:
        inside = flow.source_reach()
    else:
        co = flow.sink_coreach()
        inside = bytearray(1 - c for c in co)
    cut = _cut_of(flow, inside)
    assert len(cut) == flow.value, (cut, flow.value)
    return cut


@dataclass
class SeparatorChain:
    """Nested source regions ``J_1 < ... < J_q`` stored as deltas, with their boundaries."""

    source: int
    flow_value: int
    layers: list[list[int]] = field(default_factory=list)
    boundaries: list[list[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.layers)

    def region(self, i: int) -> set[int]:
        """``J_{i+1}`` for 0-based ``i``."""
        out: set[int] = set()
        for d in self.layers[: i + 1]:
            out.update(d)
        return out

    def regions(self) -> list[set[int]]:
        acc: set[int] = set()
        out = []
        for d in self.layers:
            acc = acc | set(d)
            out.append(acc)
        return out

    def dump(self) -> str:
        lines = [f"chain source={self.source} flow={self.flow_value} q={len(self)}"]
        for i, (d, b) in enumerate(zip(self.layers, self.boundaries), start=1):
            lines.append(f"  J{i} +{sorted(d)} N={b}")
        return "\n".join(lines)


def _tarjan_order(flow: FlowState, candidate: bytearray) -> list[list[int]]:
    """SCCs of the residual graph restricted to ``candidate`` nodes, in emission order.

    Tarjan emits a component only after every component it reaches, so adding
    them in this order keeps the grown node set closed under residual arcs.
    """
    index = {}
    low = {}
    on_stack = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    succ = flow.successors
    for root in range(len(candidate)):
        if not candidate[root] or root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, [y for y in succ(root) if y >= 0 and candidate[y]], 0)]
        while work:
            x, nbrs, pos = work[-1]
            if pos < len(nbrs):
                work[-1] = (x, nbrs, pos + 1)
                y = nbrs[pos]
                if y not in index:
                    index[y] = low[y] = counter
                    counter += 1
                    stack.append(y)
                    on_stack.add(y)
                    work.append((y, [z for z in succ(y) if z >= 0 and candidate[z]], 0))
                elif y in on_stack and index[y] < low[x]:
                    low[x] = index[y]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[x] < low[parent]:
                    low[parent] = low[x]
            if low[x] == index[x]:
                comp = []
                while True:
                    z = stack.pop()
                    on_stack.discard(z)
                    comp.append(z)
                    if z == x:
                        break
                comps.append(comp)
    return comps


def separator_chain(view: AuxView, q: CutQuery, flow: Optional[FlowState] = None) -> SeparatorChain:
    """All minimum separators lie on the boundaries of the returned nested regions.

    The chain walks a maximal chain of closed sets of the residual graph: it
    starts at the closure of the source and adds one strongly connected
    component at a time in reverse topological order, skipping components
    that reach the sink.  Every change of the induced cut yields a new
    boundary; the regions are grown incrementally by search from the copies
    that just left the boundary.
    """
    flow = flow or max_disjoint_paths(view, q)
    if flow.exceeds_cap or flow.value < 1:
        raise ValueError("separator chain needs a finite flow of value >= 1")
    size2 = 2 * flow.size
    inside = flow.source_reach()
    coreach = flow.sink_coreach()
    s = view.s
    alive = view.alive
    candidate = bytearray(size2)
    for x in range(size2):
        if inside[x] or coreach[x]:
            continue
        a = x >> 1
        if not alive[a // s] or flow._forbidden(a):
            continue
        if a == flow.source and x & 1 == 0:
            continue
        candidate[x] = 1

    cut = set(_cut_of(flow, inside))
    cuts = [sorted(cut)]
    for comp in _tarjan_order(flow, candidate):
        for x in comp:
            inside[x] = 1
        touched = False
        for x in comp:
            a = x >> 1
            if x & 1:
                if a in cut:
                    cut.discard(a)
                    touched = True
            elif not inside[x + 1]:
                cut.add(a)
                touched = True
        if touched and cut != set(cuts[-1]):
            cuts.append(sorted(cut))

    chain = SeparatorChain(q.source, flow.value)
    adj = view.adj
    first = region(view, q.source, cuts[0])
    in_region = set(first)
    chain.layers.append(first)
    chain.boundaries.append(cuts[0])
    for prev, cur in zip(cuts, cuts[1:]):
        cur_set = set(cur)
        delta = [a for a in prev if a not in cur_set]
        in_region.update(delta)
        for a in delta:  # grown in place: delta doubles as the BFS queue
            for b in adj[a]:
                if b not in in_region and b not in cur_set and alive[b // s]:
                    in_region.add(b)
                    delta.append(b)
        chain.layers.append(delta)
        chain.boundaries.append(cur)
    return chain


# -- classification -------------------------------------------------------


@dataclass(frozen=True)
class NoSmallSeparator:
    pass


@dataclass(frozen=True)
class GoodClosestToT:
    separator: list[int]
    region: list[int]  # R(source, separator)


@dataclass(frozen=True)
class NoGoodMinimum:
    separator: list[int]  # closest to the source
    witness: tuple[int, int, int]  # (u, label1, label2): two copies of u in the closed region


@dataclass(frozen=True)
class GoodBadPair:
    good: list[int]
    bad: list[int]
    good_region: list[int]
    bad_region: list[int]
    witness: tuple[int, int, int]


CruxOutcome = Union[NoSmallSeparator, GoodClosestToT, NoGoodMinimum, GoodBadPair]


def first_irregular(chain: SeparatorChain, s: int) -> Optional[tuple[int, tuple[int, int, int]]]:
    """Least 0-based ``i`` whose closed region ``N[J_i]`` holds two copies of a vertex.

    The closed regions are nested, so per-vertex copy counters are updated
    incrementally.  The witness is the lowest such vertex with its two lowest
    labels.
    """
    seen: set[int] = set()
    count: dict[int, int] = {}
    for i, (delta, bnd) in enumerate(zip(chain.layers, chain.boundaries)):
        doubled = []
        for layer in (delta, bnd):
            for a in layer:
                if a in seen:
                    continue
                seen.add(a)
                v = a // s
                c = count.get(v, 0) + 1
                count[v] = c
                if c == 2:
                    doubled.append(v)
        if doubled:
            u = min(v for v, c in count.items() if c >= 2)
            l1, l2 = sorted(a % s + 1 for a in seen if a // s == u)[:2]
            return i, (u, l1, l2)
    return None


def classify_crux(view: AuxView, q: CutQuery) -> tuple[CruxOutcome, FlowState, Optional[SeparatorChain]]:
    """Four-way classification of the minimum separators of a cut query."""
    flow = max_disjoint_paths(view, q)
    if flow.exceeds_cap:
        return NoSmallSeparator(), flow, None
    if flow.value == 0:
        raise ValueError("source is already separated from the sink set")
    chain = separator_chain(view, q, flow)
    if log.isEnabledFor(logging.DEBUG):
        log.debug(chain.dump())
    found = first_irregular(chain, view.s)
    if found is None:
        return GoodClosestToT(chain.boundaries[-1], sorted(chain.region(len(chain) - 1))), flow, chain
    i, witness = found
    if i == 0:
        return NoGoodMinimum(chain.boundaries[0], witness), flow, chain
    return (
        GoodBadPair(
            chain.boundaries[i - 1],
            chain.boundaries[i],
            sorted(chain.region(i - 1)),
            sorted(chain.region(i)),
            witness,
        ),
        flow,
        chain,
    )


# -- two paths ------------------------------------------------------------


def _bfs_path(view: AuxView, start: int, goal: int, allowed) -> Optional[list[int]]:
    """Shortest path whose internal copies all satisfy ``allowed``."""
    if start == goal:
        return [start]
    alive, s, adj = view.alive, view.s, view.adj
    parent = {start: None}
    queue = [start]
    for a in queue:
        for b in adj[a]:
            if b in parent or not alive[b // s]:
                continue
            if b == goal:
                path = [b, a]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            if allowed(b):
                parent[b] = a
                queue.append(b)
    return None


def path_through_good(
    view: AuxView, source: int, good: Sequence[int], bad: Sequence[int], target: int
) -> list[int]:
    """Source-to-target path avoiding ``bad`` internally and meeting ``good`` at most once."""
    S1, S2 = set(good), set(bad)
    R1 = set(region(view, source, S1))
    R2 = set(region(view, source, S2))
    if target not in R2 and target not in S2:
        raise ValueError(f"target {target} lies outside R[source, bad]")
    if target in R1:
        path = _bfs_path(view, source, target, R1.__contains__)
    elif target in S1:
        path = _bfs_path(view, source, target, R1.__contains__)
    else:
        # target side: internal copies strictly between the two separators
        between = lambda b: b in R2 and b not in R1 and b not in S1  # noqa: E731
        alive, s, adj = view.alive, view.s, view.adj
        parent = {target: None}
        queue = [target]
        hit = None
        for a in queue:
            for b in adj[a]:
                if b in parent or not alive[b // s]:
                    continue
                if b in S1 and b not in S2:
                    parent[b] = a
                    hit = b
                    break
                if between(b):
                    parent[b] = a
                    queue.append(b)
            if hit is not None:
                break
        if hit is None:
            raise AssertionError("no path from the target back to the good separator")
        tail = [hit]
        while parent[tail[-1]] is not None:
            tail.append(parent[tail[-1]])
        head = _bfs_path(view, source, hit, R1.__contains__)
        assert head is not None
        path = head + tail[1:]
    assert path is not None
    return path


def two_paths(
    view: AuxView, source: int, good: Sequence[int], bad: Sequence[int], t1: int, t2: int
) -> tuple[list[int], list[int]]:
    if t1 // view.s != t2 // view.s:
        raise ValueError("targets must be copies of the same vertex")
    return (
        path_through_good(view, source, good, bad, t1),
        path_through_good(view, source, good, bad, t2),
    )


def min_cut_value(view: AuxView, source: int, cap: int) -> int:
    """Flow value capped at ``cap + 1`` (``cap + 1`` means more than ``cap``)."""
    return max_disjoint_paths(view, CutQuery(view, source, cap)).value
