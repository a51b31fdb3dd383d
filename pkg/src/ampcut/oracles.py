"""Brute-force ground truth. Slow on purpose; every routine asserts its size cap."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ampcut.graph import DisjointSet, Graph, OrderedGraph, SpanningTree, require_connected

BRUTE_MIN_CUT_MAX_N = 20
BRUTE_K_CUT_MAX_N = 10
BRUTE_K_CUT_MAX_K = 4
SIMULATE_MAX_N = 500


class OracleScaleError(ValueError):
    pass


@dataclass
class BruteCut:
    value: int
    side: list[int]


def brute_min_cut(g: Graph) -> BruteCut:
    """Enumerate every proper side containing vertex 0."""
    n = g.n
    if not 2 <= n <= BRUTE_MIN_CUT_MAX_N:
        raise OracleScaleError(f"brute_min_cut needs 2 <= n <= {BRUTE_MIN_CUT_MAX_N}")
    require_connected(g)
    # vertex 0 always inside; the all-ones mask (side = V) is excluded
    masks = np.arange(0, (1 << (n - 1)) - 1, dtype=np.int64) << 1 | 1
    values = np.zeros(len(masks), dtype=np.int64)
    for u, v, c in g.edges:
        values += c * (((masks >> u) ^ (masks >> v)) & 1)
    best = int(values.min())
    # lexicographically smallest sorted side among the minimisers
    sides = [sorted(i for i in range(n) if mask >> i & 1) for mask in masks[values == best].tolist()]
    return BruteCut(best, min(sides))


def _set_partitions(n: int, k: int) -> np.ndarray:
    """All restricted growth strings of length ``n`` using exactly ``k`` blocks."""
    rows = np.zeros((1, 1), dtype=np.int8)  # vertex 0 in block 0
    for i in range(1, n):
        used = rows.max(axis=1)
        blocks = []
        for b in range(k):
            keep = rows[used + 1 >= b]
            if len(keep):
                blocks.append(np.hstack([keep, np.full((len(keep), 1), b, dtype=np.int8)]))
        rows = np.vstack(blocks)
        # prune strings that can no longer reach k blocks
        rows = rows[rows.max(axis=1) + (n - i - 1) >= k - 1]
    return rows[rows.max(axis=1) == k - 1]


def brute_k_cut(g: Graph, k: int) -> int:
    """Optimal total capacity of edges between blocks of a partition into exactly ``k`` parts."""
    n = g.n
    if n > BRUTE_K_CUT_MAX_N or k > BRUTE_K_CUT_MAX_K:
        raise OracleScaleError(f"brute_k_cut needs n <= {BRUTE_K_CUT_MAX_N}, k <= {BRUTE_K_CUT_MAX_K}")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    rows = _set_partitions(n, k)
    cost = np.zeros(len(rows), dtype=np.int64)
    for u, v, c in g.edges:
        cost += c * (rows[:, u] != rows[:, v])
    return int(cost.min())


@dataclass
class ContractionTrace:
    """Everything the contraction process defines, computed by a plain union-find sweep.

    ``snapshots[j]`` is the vertex -> class-representative array after the ``j``
    partition-changing contractions with the smallest keys; ``times[j]`` is the key of
    the ``j``-th such contraction (``times[0] = 0``). The partition at time ``t`` is the
    last snapshot with ``times[j] <= t``.
    """

    og: OrderedGraph
    times: list[int]
    snapshots: list[list[int]]
    min_value: int
    min_side: list[int]
    min_time: int
    ldr_time: list[int] | None = None

    def partition_index(self, t: int) -> int:
        lo, hi = 0, len(self.times) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.times[mid] <= t:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def bag(self, v: int, t: int) -> set[int]:
        snap = self.snapshots[self.partition_index(t)]
        return {u for u in range(len(snap)) if snap[u] == snap[v]}

    def crosses(self, edge: int, v: int, t: int) -> bool:
        snap = self.snapshots[self.partition_index(t)]
        x, y, _ = self.og.graph.edges[edge]
        return (snap[x] == snap[v]) != (snap[y] == snap[v])

    def bag_degree(self, v: int, t: int) -> int:
        snap = self.snapshots[self.partition_index(t)]
        r = snap[v]
        return sum(c for x, y, c in self.og.graph.edges if (snap[x] == r) != (snap[y] == r))


def simulate_contraction(og: OrderedGraph, labels: list[int] | None = None) -> ContractionTrace:
    """Contract edges one by one in key order and record every supervertex.

    The minimum ranges over all proper supervertices at all times. With ``labels`` the
    trace also holds, per vertex, the last time it is the minimum-label member of its own
    supervertex (capped so the whole vertex set never counts).
    """
    g = og.graph
    n = g.n
    if n > SIMULATE_MAX_N:
        raise OracleScaleError(f"simulate_contraction needs n <= {SIMULATE_MAX_N}")
    require_connected(g)
    dsu = DisjointSet(n)
    times = [0]
    snapshots = [[dsu.find(v) for v in range(n)]]
    for eid in og.edges_by_key():
        u, v, _ = g.edges[eid]
        if dsu.union(u, v):
            times.append(og.keys[eid])
            snapshots.append([dsu.find(x) for x in range(n)])
    best = None
    for j, snap in enumerate(snapshots[:-1]):  # the final snapshot is the single class V
        degree: dict[int, int] = {}
        for eid, (x, y, c) in enumerate(g.edges):
            rx, ry = snap[x], snap[y]
            if rx != ry:
                # cycle property: a crossing edge has not been reached yet
                assert og.keys[eid] > times[j]
                degree[rx] = degree.get(rx, 0) + c
                degree[ry] = degree.get(ry, 0) + c
        for r in sorted(set(snap)):
            value = degree.get(r, 0)
            if best is None or value < best[0]:
                best = (value, j, r)
    if best is None:  # n == 1
        trace = ContractionTrace(og, times, snapshots, 0, [0], 0)
    else:
        value, j, r = best
        side = [v for v in range(n) if snapshots[j][v] == r]
        trace = ContractionTrace(og, times, snapshots, value, side, times[j])
    if labels is not None:
        cap = max(times[-1] - 1, 0)
        ldr = [0] * n
        for v in range(n):
            last = 0
            for j in range(len(snapshots)):
                if times[j] > cap:
                    break
                snap = snapshots[j]
                leads = all(labels[u] > labels[v] for u in range(n) if u != v and snap[u] == snap[v])
                if not leads:
                    break
                nxt = times[j + 1] - 1 if j + 1 < len(times) else cap
                last = min(nxt, cap)
            ldr[v] = last
        trace.ldr_time = ldr
    return trace


def crossing_table(trace: ContractionTrace, horizon: int | None = None) -> np.ndarray:
    """``cross[t, v, e]``: does edge ``e`` cross the supervertex of ``v`` at time ``t``?

    Times run over ``0..horizon`` (default ``max key - 1``).
    """
    og = trace.og
    horizon = max(og.max_key - 1, 0) if horizon is None else horizon
    snaps = np.asarray(trace.snapshots)  # (J, n)
    which = np.searchsorted(np.asarray(trace.times), np.arange(horizon + 1), side="right") - 1
    xs = np.fromiter((u for u, _, _ in og.graph.edges), dtype=np.int64)
    ys = np.fromiter((v for _, v, _ in og.graph.edges), dtype=np.int64)
    per_snap = (snaps[:, None, xs] == snaps[:, :, None]) != (snaps[:, None, ys] == snaps[:, :, None])
    return per_snap[which]


def interval_mismatches(intervals, ldr_time, trace: ContractionTrace) -> list[tuple[int, int, int]]:
    """``(time, owner, edge)`` triples where claimed windows disagree with the sweep.

    While ``v`` leads (``t <= ldr_time[v]``), edge ``e`` must cross ``v``'s supervertex
    exactly at the claimed times; every other claim is a mismatch, as is a pair claimed twice.
    """
    cross = crossing_table(trace)
    claimed = np.zeros(cross.shape, dtype=np.int64)
    for iv in intervals:
        claimed[iv.a : iv.b + 1, iv.owner, iv.edge] += 1
    window = np.arange(cross.shape[0])[:, None] <= np.asarray(ldr_time)[None, :]
    expected = cross & window[:, :, None]
    return [tuple(map(int, x)) for x in np.argwhere(claimed != expected)]


def naive_path_scan(t: SpanningTree, u: int, a: int, reduce=max) -> int | None:
    """Walk parent pointers from ``u`` to ``a``; ``None`` if ``a`` is not an ancestor."""
    keys = []
    while u != a:
        if u < 0 or t.parent[u] < 0:
            return None
        keys.append(t.parent_key[u])
        u = t.parent[u]
    if not keys:
        return 0 if reduce is max else None
    return reduce(keys)


def naive_coverage(intervals, horizon: int) -> tuple[int, int]:
    best = None
    for t in range(horizon + 1):
        total = sum(iv.multiplicity for iv in intervals if iv.a <= t <= iv.b)
        if best is None or total < best[0]:
            best = (total, t)
    return best


def naive_decomp_validate(t: SpanningTree, levels: list[int], h: int | None = None) -> bool:
    """Flood fill every forest on labels ``>= i`` and count label-``i`` vertices."""
    n = t.n
    h = max(levels) if h is None else h
    for i in range(1, h + 1):
        seen: set[int] = set()
        for s in range(n):
            if levels[s] < i or s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in t.neighbours(x):
                    if levels[y] >= i and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if sum(1 for x in comp if levels[x] == i) > 1:
                return False
    return True
