"""Greedy splitting for minimum k-cut.

Repeatedly cut the component whose (approximate) minimum cut is cheapest until at
least ``k`` components remain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ampcut.graph import Graph, GraphError, connected_components, require_connected
from ampcut.mincut import ampc_min_cut, stoer_wagner
from ampcut.seeding import derive_seed

SOLVERS = ("exact", "ampc")


@dataclass
class KCutResult:
    k: int
    parts: list[list[int]]
    removed_edges: list[int]
    total_value: int
    per_step: list[tuple[int, int]] = field(default_factory=list)  # (component id, cut value)
    component_counts: list[int] = field(default_factory=list)  # after each step

    def dump(self) -> str:
        lines = [f"k {self.k}", f"value {self.total_value}"]
        lines += [f"part {i}: {' '.join(map(str, part))}" for i, part in enumerate(self.parts)]
        return "\n".join(lines) + "\n"


def _remaining(g: Graph, removed: set[int]) -> tuple[Graph, list[int]]:
    keep = [e for e in range(g.m) if e not in removed]
    return Graph(g.n, [g.edges[e] for e in keep]), keep


def apx_split(
    g: Graph,
    k: int,
    solver: str = "exact",
    *,
    epsilon: float = 0.5,
    trials: int | None = None,
    seed: int = 0,
    base: int | None = None,
) -> KCutResult:
    """Split ``g`` into at least ``k`` parts by repeatedly removing the cheapest component cut.

    ``solver="ampc"`` uses the recursive contraction algorithm (``epsilon``, ``trials``,
    ``base`` are passed through); ``"exact"`` uses Stoer-Wagner.
    """
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}")
    if not 2 <= k <= g.n:
        raise GraphError(f"need 2 <= k <= n, got k={k}, n={g.n}")
    require_connected(g)
    removed: set[int] = set()
    per_step: list[tuple[int, int]] = []
    counts: list[int] = []
    step = 0
    comps = connected_components(g)
    while comps.count < k:
        h, _ = _remaining(g, removed)
        best = None
        for cid, members in enumerate(comps.groups()):
            if len(members) < 2:
                continue
            sub, local = h.induced(members)
            if solver == "exact":
                value, side = stoer_wagner(sub)
            else:
                res = ampc_min_cut(sub, epsilon, derive_seed(seed, "step", step, cid), trials, base=base)
                value, side = res.value, res.side
            if best is None or value < best[0]:
                best = (value, cid, [local[v] for v in side])
        value, cid, side = best
        inside = set(side)
        members = set(comps.groups()[cid])
        cut = [
            e
            for e, (u, v, _) in enumerate(g.edges)
            if e not in removed and u in members and v in members and (u in inside) != (v in inside)
        ]
        removed.update(cut)
        per_step.append((cid, value))
        comps = connected_components(_remaining(g, removed)[0])
        counts.append(comps.count)
        step += 1
    total = sum(g.edges[e][2] for e in removed)
    return KCutResult(k, comps.groups(), sorted(removed), total, per_step, counts)
