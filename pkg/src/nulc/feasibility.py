"""Zero-budget feasibility: label propagation through the expanded graph."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, Optional, Sequence

from .auxgraph import AuxView
from .instance import Instance, labels_of


@dataclass(frozen=True)
class ComponentLabeling:
    component: tuple[int, ...]
    labeling: Optional[dict[int, int]]  # None marks an infeasible component

    @property
    def feasible(self) -> bool:
        return self.labeling is not None


def propagate_from(
    view: AuxView, seed: int, forbidden: Optional[Collection[int]] = None
) -> tuple[Optional[dict[int, int]], list[int]]:
    """Breadth-first search from ``seed`` avoiding ``forbidden`` copies.

    Returns ``(None, reached)`` as soon as the search meets a second copy of
    some vertex or a copy whose label is not allowed; otherwise the labeling
    that gives every reached vertex the label of its reached copy.
    """
    s = view.s
    tau = view.inst.tau
    alive = view.alive
    adj = view.adj
    avoid = forbidden or ()
    v0, i0 = divmod(seed, s)
    if not (tau[v0] >> i0) & 1:
        return None, [seed]
    labeling = {v0: i0 + 1}
    reached = [seed]
    head = 0
    while head < len(reached):
        a = reached[head]
        head += 1
        for b in adj[a]:
            w, j = divmod(b, s)
            if not alive[w] or b in avoid:
                continue
            got = labeling.get(w)
            if got is not None:
                if got != j + 1:
                    reached.append(b)
                    return None, reached
                continue
            if not (tau[w] >> j) & 1:
                reached.append(b)
                return None, reached
            labeling[w] = j + 1
            reached.append(b)
    return labeling, reached


def component_feasible(inst: Instance, component: Sequence[int], view: Optional[AuxView] = None) -> ComponentLabeling:
    """Try every allowed label of the lowest vertex; first conflict-free one wins."""
    view = view or AuxView(inst)
    w = min(component)
    for i in labels_of(inst.tau[w]):
        labeling, _ = propagate_from(view, view.index(w, i))
        if labeling is not None:
            return ComponentLabeling(tuple(component), labeling)
    return ComponentLabeling(tuple(component), None)


def feasible_labeling(inst: Instance) -> Optional[dict[int, int]]:
    """Labeling of all live vertices, or None if some component is infeasible."""
    view = AuxView(inst)
    out: dict[int, int] = {}
    for comp in inst.components():
        res = component_feasible(inst, comp, view)
        if res.labeling is None:
            return None
        out.update(res.labeling)
    return out
