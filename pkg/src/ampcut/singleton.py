"""Smallest singleton cut of a random contraction process.

Contracting edges in key order only ever merges along the minimum spanning tree, so
the supervertex holding ``v`` at time ``t`` (its *bag*) is the set of vertices reachable
from ``v`` over tree edges with key ``<= t``. Every bag is charged to its *leader*, the
vertex of minimum decomposition level inside it. A vertex ``v`` at level ``i`` leads its
bag up to ``ldr_time(v)``, and during that window the bag never leaves ``v``'s component
of the forest on levels ``>= i``. Each graph edge therefore crosses a leader's bag during
one contiguous window of times, and the smallest bag degree is the smallest total
multiplicity of those windows covering one time point. All levels are handled side by
side, so the whole computation takes a constant number of AMPC rounds.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ampcut.decomp import LevelLabeling, decomposition_forest, low_depth_decomp
from ampcut.graph import GraphError, OrderedGraph, SpanningTree, kruskal_mst
from ampcut.pathquery import PathExtremumIndex, TimeInterval, build_index, min_coverage
from ampcut.runtime import AmpcRuntime, TaskContext, make_runtime


@dataclass
class LeaderTimes:
    ldr_time: list[int]
    cap: int
    boundary: list[tuple[tuple[int, int, int], ...]]  # per vertex: (inside, outside, key)


@dataclass
class SingletonWitness:
    leader: int
    time: int
    value: int
    side: list[int]
    level: int = 0

    def dump(self) -> str:
        lines = [f"value {self.value}", f"leader {self.leader}", f"time {self.time}"]
        lines += [f"side {v}" for v in self.side]
        return "\n".join(lines) + "\n"


def boundary_table(t: SpanningTree, lab: LevelLabeling, up: Sequence[int]) -> list[tuple]:
    """For each vertex ``v``: the tree edges leaving ``v``'s component at level ``level[v]``.

    A tree edge whose endpoints have levels ``lo < hi`` leaves exactly those components
    led by the decomposition ancestors ``r`` of the higher endpoint with ``lo < level[r]``.
    """
    level = lab.level
    found: list[list[tuple[int, int, int]]] = [[] for _ in range(t.n)]
    for child, par, key in t.tree_edges():
        hi, lo = (child, par) if level[child] > level[par] else (par, child)
        r = hi
        while r >= 0 and level[r] > level[lo]:
            found[r].append((hi, lo, key))
            r = up[r]
    return [tuple(sorted(edges)) for edges in found]


def leader_times(
    t: SpanningTree,
    lab: LevelLabeling,
    idx: PathExtremumIndex,
    up: Sequence[int] | None = None,
) -> LeaderTimes:
    """Last time each vertex is the minimum-level member of its own bag.

    ``v`` stops leading when its bag first takes in a lower-level vertex, i.e. when the
    tree path from ``v`` through one of (at most two) boundary edges is fully contracted.
    The vertex whose component never has a boundary is capped at ``max key - 1`` so the
    full vertex set is never reported as a cut.
    """
    up = decomposition_forest(t, lab) if up is None else up
    boundary = boundary_table(t, lab, up)
    cap = max(max(t.parent_key, default=0) - 1, 0)
    ldr = [_leader_time(v, boundary[v], idx, cap) for v in range(t.n)]
    return LeaderTimes(ldr, cap, boundary)


def _leader_time(v: int, boundary, idx: PathExtremumIndex, cap: int, ctx: TaskContext | None = None) -> int:
    if not boundary:
        return cap
    return min(max(idx.path_max(v, p, ctx), key) for p, _, key in boundary) - 1


def edge_intervals(
    level: int,
    edge: int,
    capacity: int,
    root_x: int | None,
    root_y: int | None,
    mw_x: int,
    mw_y: int,
    ldr_time: Sequence[int] | Mapping[int, int],
) -> list[TimeInterval]:
    """Windows during which edge ``(x, y)`` crosses the bag of a level-``level`` leader.

    ``root_x`` is the level-``level`` vertex of ``x``'s component (``None`` when there is
    none) and ``mw_x`` the largest key on the tree path between them, i.e. the time ``x``
    joins that leader's bag.
    """
    out: list[TimeInterval] = []
    if root_x is None and root_y is None:
        return out
    if root_x is not None and root_x == root_y:
        lo, hi = min(mw_x, mw_y), max(mw_x, mw_y) - 1
        hi = min(hi, ldr_time[root_x])
        if lo <= hi:
            out.append(TimeInterval(lo, hi, root_x, edge, capacity))
        return out
    for root, mw in ((root_x, mw_x), (root_y, mw_y)):
        if root is not None and mw <= ldr_time[root]:
            out.append(TimeInterval(mw, ldr_time[root], root, edge, capacity))
    return out


def level_min(
    level: int,
    leaders: Sequence[int],
    intervals: Mapping[int, list[TimeInterval]],
    ldr_time: Sequence[int],
) -> tuple[int, int, int] | None:
    """``(value, time, leader)`` minimising bag degree over the leaders of one level."""
    best = None
    for v in leaders:
        value, when = min_coverage(intervals.get(v, ()), ldr_time[v])
        if best is None or (value, when, v) < best:
            best = (value, when, v)
    return best


def bag(t: SpanningTree, v: int, time: int) -> list[int]:
    """Vertices reachable from ``v`` over tree edges with key ``<= time``."""
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        p = t.parent[x]
        if p >= 0 and t.parent_key[x] <= time and p not in seen:
            seen.add(p)
            stack.append(p)
        for c in t.children[x]:
            if t.parent_key[c] <= time and c not in seen:
                seen.add(c)
                stack.append(c)
    return sorted(seen)


@dataclass
class SingletonAnalysis:
    """All intermediate products of one run, kept for inspection and testing."""

    og: OrderedGraph
    tree: SpanningTree
    labeling: LevelLabeling
    index: PathExtremumIndex
    up: list[int]
    leader_times: LeaderTimes
    intervals: dict[int, dict[int, list[TimeInterval]]] = field(default_factory=dict)  # level -> owner -> list
    per_level: dict[int, tuple[int, int, int]] = field(default_factory=dict)
    witness: SingletonWitness | None = None


def analyze(og: OrderedGraph, rt: AmpcRuntime | None = None) -> SingletonAnalysis:
    g = og.graph
    n = g.n
    if n < 2:
        raise GraphError("singleton cuts need at least two vertices")
    rt = rt or make_runtime(0.5, n, g.m)
    rt.load({("edge", e): (u, v, c, og.keys[e]) for e, (u, v, c) in enumerate(g.edges)})

    tree = kruskal_mst(og)  # raises on disconnected input
    rt.primitive("mst", lambda: {("cap",): max(max(tree.parent_key) - 1, 0)})
    lab = low_depth_decomp(tree, rt)
    level = lab.level
    index = build_index(tree)
    rt.primitive("path-index", lambda: None)
    up = decomposition_forest(tree, lab)
    boundary = boundary_table(tree, lab, up)
    rt.primitive(
        "level-components",
        lambda: {**{("up", v): up[v] for v in range(n)}, **{("boundary", v): boundary[v] for v in range(n)}},
    )

    def leader_task(ctx: TaskContext, v: int) -> None:
        cap = ctx.read(("cap",))
        ctx.write(("ldr", v), _leader_time(v, ctx.read(("boundary", v)), index, cap, ctx))
        # level-by-level roots of v's components and the time v joins each root's bag
        chain = []
        r = v
        while r >= 0:
            lvl = ctx.read(("level", r))
            chain.append((lvl, r, index.path_max(v, r, ctx) if r != v else 0))
            r = ctx.read(("up", r))
        ctx.write(("roots", v), tuple(chain))

    rt.map_round("leader-times", range(n), leader_task)
    ldr = [rt.table[("ldr", v)] for v in range(n)]
    times = LeaderTimes(ldr, rt.table[("cap",)], boundary)

    def interval_task(ctx: TaskContext, e: int) -> None:
        x, y, c, _ = ctx.read(("edge", e))
        roots_x = {lvl: (r, mw) for lvl, r, mw in ctx.read(("roots", x))}
        roots_y = {lvl: (r, mw) for lvl, r, mw in ctx.read(("roots", y))}
        found = []
        owners: dict[int, int] = {}
        for lvl in sorted(roots_x.keys() | roots_y.keys()):
            rx, mwx = roots_x.get(lvl, (None, 0))
            ry, mwy = roots_y.get(lvl, (None, 0))
            for r in (rx, ry):
                if r is not None and r not in owners:
                    owners[r] = ctx.read(("ldr", r))
            for iv in edge_intervals(lvl, e, c, rx, ry, mwx, mwy, owners):
                found.append((lvl, iv.owner, iv.a, iv.b))
        ctx.write(("intervals", e), tuple(found))

    rt.map_round("edge-intervals", range(g.m), interval_task)

    analysis = SingletonAnalysis(og, tree, lab, index, up, times)

    def sweep() -> dict:
        grouped: dict[int, dict[int, list[TimeInterval]]] = defaultdict(lambda: defaultdict(list))
        for e in range(g.m):
            cap_e = g.edges[e][2]
            for lvl, owner, a, b in rt.table[("intervals", e)]:
                grouped[lvl][owner].append(TimeInterval(a, b, owner, e, cap_e))
        leaders_by_level: dict[int, list[int]] = defaultdict(list)
        for v in range(n):
            leaders_by_level[level[v]].append(v)
        out = {}
        for lvl in sorted(leaders_by_level):
            best = level_min(lvl, leaders_by_level[lvl], grouped.get(lvl, {}), ldr)
            analysis.per_level[lvl] = best
            out[("level_min", lvl)] = best
        analysis.intervals = {lvl: dict(owners) for lvl, owners in grouped.items()}
        return out

    rt.primitive("sort-and-sweep", sweep)

    def reduce_min() -> dict:
        value, when, lvl, leader = min((b[0], b[1], lvl, b[2]) for lvl, b in analysis.per_level.items())
        return {("best",): (value, when, lvl, leader)}

    value, when, lvl, leader = rt.primitive("min-reduce", reduce_min)[("best",)]
    side = rt.primitive("witness-bag", lambda: {("side",): tuple(bag(tree, leader, when))})[("side",)]
    analysis.witness = SingletonWitness(leader, when, value, list(side), lvl)
    return analysis


def smallest_singleton_cut(og: OrderedGraph, rt: AmpcRuntime | None = None) -> SingletonWitness:
    return analyze(og, rt).witness
