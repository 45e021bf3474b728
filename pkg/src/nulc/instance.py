"""Instance model for Node Unique Label Cover.

Vertices are 0-based inside Python and 1-based in the text formats.  Labels
are 1-based everywhere.  Allowed-label sets are stored as int bit masks where
bit ``i - 1`` stands for label ``i``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class ParseError(ValueError):
    """Malformed instance or solution text; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{1..s}``; ``image[i - 1]`` is the image of label ``i``."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        s = len(self.image)
        if sorted(self.image) != list(range(1, s + 1)):
            raise ValueError(f"not a permutation of 1..{s}: {self.image}")

    @classmethod
    def identity(cls, s: int) -> "Permutation":
        return cls(tuple(range(1, s + 1)))

    @classmethod
    def shift(cls, s: int, g: int) -> "Permutation":
        return cls(tuple((i + g) % s + 1 for i in range(s)))

    @property
    def size(self) -> int:
        return len(self.image)

    def __call__(self, label: int) -> int:
        return self.image[label - 1]

    def inverse(self) -> "Permutation":
        return perm_inverse(self)

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        return Permutation(tuple(self.image[j - 1] for j in other.image))


def perm_inverse(p: Permutation) -> Permutation:
    inv = [0] * p.size
    for i, j in enumerate(p.image, start=1):
        inv[j - 1] = i
    return Permutation(tuple(inv))


def full_mask(s: int) -> int:
    return (1 << s) - 1


def mask_of(labels: Iterable[int]) -> int:
    m = 0
    for i in labels:
        m |= 1 << (i - 1)
    return m


def labels_of(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class Graph:
    """Immutable simple graph with one permutation per edge.

    ``edges[e] = (u, v, p)`` with ``u < v`` and ``p`` the permutation for the
    endpoint ``u``; the ``v`` side is its inverse.  Adjacency lists keep input
    order.  The auxiliary adjacency ``aux_adj`` over dense indices
    ``v * s + label - 1`` is built once here and shared by every instance
    derived from this graph.
    """

    def __init__(self, n: int, s: int, edges: Sequence[tuple[int, int, Permutation]]):
        if n < 0 or s < 1:
            raise ValueError("need n >= 0 and s >= 1")
        self.n = n
        self.s = s
        norm: list[tuple[int, int, Permutation]] = []
        seen: set[tuple[int, int]] = set()
        for u, v, p in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge endpoint out of range: {(u, v)}")
            if u == v:
                raise ValueError(f"self loop at vertex {u}")
            if p.size != s:
                raise ValueError(f"permutation of size {p.size} on alphabet {s}")
            if u > v:
                u, v, p = v, u, p.inverse()
            if (u, v) in seen:
                raise ValueError(f"duplicate edge {(u, v)}")
            seen.add((u, v))
            norm.append((u, v, p))
        self.edges: tuple[tuple[int, int, Permutation], ...] = tuple(norm)
        self.m = len(norm)

        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v, _) in enumerate(norm):
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        self.adj = adj
        self.nbrs: list[list[int]] = [[w for w, _ in lst] for lst in adj]
        self._inverses = [p.inverse() for _, _, p in norm]

        aux_adj: list[list[int]] = [[] for _ in range(n * s)]
        for v in range(n):
            base = v * s
            for w, eid in adj[v]:
                img = self.perm(eid, v).image
                wbase = w * s - 1
                for i in range(s):
                    aux_adj[base + i].append(wbase + img[i])
        self.aux_adj = aux_adj

    def perm(self, eid: int, endpoint: int) -> Permutation:
        """Permutation of edge ``eid`` seen from ``endpoint``."""
        u, v, p = self.edges[eid]
        if endpoint == u:
            return p
        if endpoint == v:
            return self._inverses[eid]
        raise ValueError(f"vertex {endpoint} is not an endpoint of edge {eid}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.s, self.edges) == (other.n, other.s, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.s, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, s={self.s})"


@dataclass(frozen=True)
class Instance:
    graph: Graph
    k: int
    tau: tuple[int, ...]
    undeletable: frozenset[int] = frozenset()
    anchor: Optional[int] = None
    alive: bytes = b""
    comments: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        n, s = self.graph.n, self.graph.s
        if not self.alive:
            object.__setattr__(self, "alive", b"\x01" * n)
        if len(self.tau) != n or len(self.alive) != n:
            raise ValueError("tau / alive must have one entry per vertex")
        if self.k < 0:
            raise ValueError("budget k must be non-negative")
        fm = full_mask(s)
        for m in self.tau:
            if m & ~fm:
                raise ValueError(f"tau mask {m:b} exceeds alphabet size {s}")
        for v in self.undeletable:
            if not 0 <= v < n:
                raise ValueError(f"undeletable vertex {v} out of range")
        if self.anchor is not None:
            a = self.anchor
            if bin(self.tau[a]).count("1") != 1:
                raise ValueError("anchor must have a singleton allowed-label set")
            if a not in self.undeletable:
                raise ValueError("anchor must be undeletable")

    @classmethod
    def build(
        cls,
        n: int,
        s: int,
        k: int,
        edges: Iterable[tuple[int, int, Sequence[int] | Permutation]],
        tau: Optional[Mapping[int, Iterable[int]]] = None,
        undeletable: Iterable[int] = (),
        comments: Sequence[str] = (),
    ) -> "Instance":
        """Convenience constructor: 0-based vertices, 1-based labels."""
        es = [(u, v, p if isinstance(p, Permutation) else Permutation(tuple(p))) for u, v, p in edges]
        masks = [full_mask(s)] * n
        for v, labels in (tau or {}).items():
            masks[v] = mask_of(labels)
        return cls(Graph(n, s, es), k, tuple(masks), frozenset(undeletable), comments=tuple(comments))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def s(self) -> int:
        return self.graph.s

    def allowed(self, v: int) -> list[int]:
        return labels_of(self.tau[v])

    def is_alive(self, v: int) -> bool:
        return bool(self.alive[v])

    def vertices(self) -> Iterator[int]:
        alive = self.alive
        return (v for v in range(self.graph.n) if alive[v])

    def neighbors(self, v: int) -> Iterator[tuple[int, int]]:
        alive = self.alive
        return ((w, e) for w, e in self.graph.adj[v] if alive[w])

    def live_edges(self) -> Iterator[int]:
        alive = self.alive
        for eid, (u, v, _) in enumerate(self.graph.edges):
            if alive[u] and alive[v]:
                yield eid

    def components(self) -> list[list[int]]:
        """Connected components of the live graph, each sorted, ordered by min id."""
        alive = self.alive
        nbrs = self.graph.nbrs
        seen = bytearray(self.graph.n)
        comps = []
        for r in range(self.graph.n):
            if not alive[r] or seen[r]:
                continue
            seen[r] = 1
            comp = [r]
            stack = [r]
            while stack:
                x = stack.pop()
                for w in nbrs[x]:
                    if alive[w] and not seen[w]:
                        seen[w] = 1
                        comp.append(w)
                        stack.append(w)
            comp.sort()
            comps.append(comp)
        return comps

    def evolve(
        self,
        *,
        k: Optional[int] = None,
        kill: Iterable[int] = (),
        tau: Optional[Mapping[int, int]] = None,
        undeletable: Iterable[int] = (),
        anchor: Optional[int] = -1,
    ) -> "Instance":
        """Copy with changes; ``anchor=-1`` keeps the current anchor."""
        alive = self.alive
        kill = list(kill)
        if kill:
            buf = bytearray(alive)
            for v in kill:
                buf[v] = 0
            alive = bytes(buf)
        taus = self.tau
        if tau:
            lst = list(taus)
            for v, m in tau.items():
                lst[v] = m
            taus = tuple(lst)
        und = self.undeletable
        extra = set(undeletable)
        if extra - und:
            und = und | extra
        new_anchor = self.anchor if anchor == -1 else anchor
        if new_anchor is not None and not alive[new_anchor]:
            new_anchor = None
        return replace(
            self,
            k=self.k if k is None else k,
            tau=taus,
            undeletable=und,
            anchor=new_anchor,
            alive=alive,
        )


def aux_index(v: int, label: int, s: int) -> int:
    return v * s + label - 1


@dataclass(frozen=True)
class Solution:
    decision: bool
    deletions: frozenset[int] = frozenset()
    labeling: Mapping[int, int] = field(default_factory=dict)

    @classmethod
    def no(cls) -> "Solution":
        return cls(False)


class Reason(enum.Enum):
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"
    UNDELETABLE_DELETED = "UNDELETABLE_DELETED"
    TAU_VIOLATION = "TAU_VIOLATION"
    EDGE_VIOLATION = "EDGE_VIOLATION"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: Optional[Reason] = None
    where: Optional[int] = None  # vertex for TAU_VIOLATION, edge id for EDGE_VIOLATION

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ACCEPT"
        if self.where is None:
            return self.reason.value
        return f"{self.reason.value}({self.where + 1})"


def verify_solution(inst: Instance, sol: Solution) -> Verdict:
    """Check a YES witness against ``inst``; vertices killed in ``inst`` are ignored."""
    if not sol.decision:
        raise ValueError("verify_solution expects a YES solution")
    X = sol.deletions
    if len(X) > inst.k:
        return Verdict(False, Reason.BUDGET_EXCEEDED)
    for x in sorted(X):
        if x in inst.undeletable:
            return Verdict(False, Reason.UNDELETABLE_DELETED, x)
    lab = sol.labeling
    for v in inst.vertices():
        if v in X:
            continue
        a = lab.get(v)
        if a is None or not (1 <= a <= inst.s) or not (inst.tau[v] >> (a - 1)) & 1:
            return Verdict(False, Reason.TAU_VIOLATION, v)
    g = inst.graph
    for eid in inst.live_edges():
        u, v, p = g.edges[eid]
        if u in X or v in X:
            continue
        if p(lab[u]) != lab[v]:
            return Verdict(False, Reason.EDGE_VIOLATION, eid)
    return Verdict(True)


def _empty_tau(inst: Instance) -> list[int]:
    return [v for v in inst.vertices() if inst.tau[v] == 0]


def force_deletions(inst: Instance) -> Optional[Instance]:
    """Delete every live vertex whose allowed-label set is empty.

    Returns ``None`` (a NO answer) when such a vertex is undeletable or the
    budget cannot pay for the deletions.
    """
    empty = _empty_tau(inst)
    if not empty:
        return inst
    if any(v in inst.undeletable for v in empty) or len(empty) > inst.k:
        return None
    return inst.evolve(k=inst.k - len(empty), kill=empty)


# ---------------------------------------------------------------- text formats


def _tokens(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected integer {what}, got {tok!r}") from None


def parse_instance(text: str) -> Instance:
    lines = _tokens(text)
    comments = tuple(raw.strip()[1:].strip() for raw in text.splitlines() if raw.strip().startswith("#"))
    first = next(lines, None)
    if first is None or first[1] != ["ulc", "1"]:
        raise ParseError(first[0] if first else 1, "expected header 'ulc 1'")
    second = next(lines, None)
    if second is None:
        raise ParseError(first[0] + 1, "missing size line 'n <n> m <m> sigma <s> k <k>'")
    lineno, toks = second
    size_line = lineno
    if len(toks) != 8 or toks[0::2] != ["n", "m", "sigma", "k"]:
        raise ParseError(lineno, "expected 'n <n> m <m> sigma <s> k <k>'")
    n, m, s, k = (_int(t, lineno, name) for t, name in zip(toks[1::2], ("n", "m", "sigma", "k")))
    if n < 0 or m < 0 or s < 1 or k < 0:
        raise ParseError(lineno, "n, m, k must be >= 0 and sigma >= 1")

    def vertex(tok: str, lineno: int) -> int:
        v = _int(tok, lineno, "vertex id")
        if not 1 <= v <= n:
            raise ParseError(lineno, f"vertex {v} out of range 1..{n}")
        return v - 1

    masks = [full_mask(s)] * n
    tau_seen: set[int] = set()
    und: set[int] = set()
    edges: list[tuple[int, int, Permutation]] = []
    pairs: set[tuple[int, int]] = set()
    for lineno, toks in lines:
        kind = toks[0]
        if kind == "v":
            if len(toks) < 3 or toks[2] != "tau":
                raise ParseError(lineno, "expected 'v <id> tau <labels...>'")
            v = vertex(toks[1], lineno)
            if v in tau_seen:
                raise ParseError(lineno, f"tau given twice for vertex {v + 1}")
            tau_seen.add(v)
            mask = 0
            for t in toks[3:]:
                lab = _int(t, lineno, "label")
                if not 1 <= lab <= s:
                    raise ParseError(lineno, f"label {lab} out of range 1..{s}")
                mask |= 1 << (lab - 1)
            masks[v] = mask
        elif kind == "undeletable":
            if len(toks) != 2:
                raise ParseError(lineno, "expected 'undeletable <id>'")
            und.add(vertex(toks[1], lineno))
        elif kind == "e":
            if len(toks) != 3 + s:
                raise ParseError(lineno, f"expected 'e <u> <v>' followed by {s} labels")
            u, v = vertex(toks[1], lineno), vertex(toks[2], lineno)
            if u == v:
                raise ParseError(lineno, "self loops are not allowed")
            key = (min(u, v), max(u, v))
            if key in pairs:
                raise ParseError(lineno, f"duplicate edge {u + 1} {v + 1}")
            pairs.add(key)
            img = tuple(_int(t, lineno, "label") for t in toks[3:])
            try:
                p = Permutation(img)
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from None
            edges.append((u, v, p))
        else:
            raise ParseError(lineno, f"unknown record {kind!r}")
    if len(edges) != m:
        raise ParseError(size_line, f"header announces m={m} edges, found {len(edges)}")
    return Instance(Graph(n, s, edges), k, tuple(masks), frozenset(und), comments=comments)


def serialize_instance(inst: Instance, comments: Sequence[str] = ()) -> str:
    g = inst.graph
    out = ["ulc 1"]
    out.extend(f"# {c}" for c in (*inst.comments, *comments))
    out.append(f"n {g.n} m {g.m} sigma {g.s} k {inst.k}")
    fm = full_mask(g.s)
    for v in range(g.n):
        if inst.tau[v] != fm:
            out.append(" ".join(["v", str(v + 1), "tau", *map(str, labels_of(inst.tau[v]))]))
    for v in sorted(inst.undeletable):
        out.append(f"undeletable {v + 1}")
    for u, v, p in g.edges:
        out.append(" ".join(["e", str(u + 1), str(v + 1), *map(str, p.image)]))
    return "\n".join(out) + "\n"


def serialize_solution(sol: Solution, n: Optional[int] = None) -> str:
    if not sol.decision:
        return "NO\n"
    out = ["YES", " ".join(["delete", *(str(x + 1) for x in sorted(sol.deletions))])]
    for v in sorted(sol.labeling):
        out.append(f"label {v + 1} {sol.labeling[v]}")
    return "\n".join(out) + "\n"


def parse_solution(text: str) -> Solution:
    lines = _tokens(text)
    first = next(lines, None)
    if first is None or first[1] not in (["YES"], ["NO"]):
        raise ParseError(first[0] if first else 1, "expected 'YES' or 'NO'")
    if first[1] == ["NO"]:
        return Solution.no()
    second = next(lines, None)
    if second is None or second[1][0] != "delete":
        raise ParseError(second[0] if second else first[0] + 1, "expected 'delete <ids...>'")
    lineno, toks = second
    X = set()
    for t in toks[1:]:
        x = _int(t, lineno, "vertex id")
        if x < 1:
            raise ParseError(lineno, f"vertex {x} out of range")
        X.add(x - 1)
    labeling = {}
    for lineno, toks in lines:
        if len(toks) != 3 or toks[0] != "label":
            raise ParseError(lineno, "expected 'label <v> <i>'")
        v = _int(toks[1], lineno, "vertex id")
        if v < 1:
            raise ParseError(lineno, f"vertex {v} out of range")
        labeling[v - 1] = _int(toks[2], lineno, "label")
    return Solution(True, frozenset(X), labeling)
