"""Path extremum queries over heavy paths, and minimum interval coverage."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ampcut.decomp import HeavyLightInfo, heavy_light
from ampcut.graph import SpanningTree
from ampcut.runtime import TaskContext


class NotAncestorError(ValueError):
    pass


class _SparseTable:
    __slots__ = ("levels", "op")

    def __init__(self, values: Sequence[int], op) -> None:
        self.op = op
        levels = [list(values)]
        width = 1
        while 2 * width <= len(values):
            prev = levels[-1]
            levels.append([op(prev[i], prev[i + width]) for i in range(len(prev) - width)])
            width *= 2
        self.levels = levels

    def query(self, lo: int, hi: int) -> int:
        """Extremum over positions ``lo..hi`` inclusive."""
        k = (hi - lo + 1).bit_length() - 1
        row = self.levels[k]
        return self.op(row[lo], row[hi - (1 << k) + 1])


class PathExtremumIndex:
    """Heavy-path sparse tables over the key of each vertex's parent edge.

    A query touches O(log n) heavy paths; each touched path costs one descriptor read
    and two sparse-table reads, which is what gets charged to a task context.
    """

    def __init__(self, t: SpanningTree, hl: HeavyLightInfo | None = None) -> None:
        self.tree = t
        self.hl = hl or heavy_light(t)
        self.depth = t.depth()
        self._max = []
        self._min = []
        for chain in self.hl.chains:
            keys = [t.parent_key[v] for v in chain]
            self._max.append(_SparseTable(keys, max))
            self._min.append(_SparseTable(keys, min))
        self.queries = 0

    def _charge(self, ctx: TaskContext | None, count: int) -> None:
        self.queries += count
        if ctx is not None:
            ctx.charge(count)

    def is_ancestor(self, a: int, u: int) -> bool:
        t, depth = self.tree, self.depth
        if depth[a] > depth[u]:
            return False
        chain_of, chain_pos, chains = self.hl.chain_of, self.hl.chain_pos, self.hl.chains
        while chain_of[u] != chain_of[a]:
            u = t.parent[chains[chain_of[u]][0]]
            if u < 0:
                return False
        return chain_pos[a] <= chain_pos[u]

    def _extremum(self, u: int, a: int, tables, op, ctx):
        t = self.tree
        chain_of, chain_pos, chains = self.hl.chain_of, self.hl.chain_pos, self.hl.chains
        best = None
        touched = 0
        while chain_of[u] != chain_of[a]:
            c = chain_of[u]
            value = tables[c].query(0, chain_pos[u])
            best = value if best is None else op(best, value)
            touched += 1
            u = t.parent[chains[c][0]]
            if u < 0:
                raise NotAncestorError(f"{a} is not an ancestor")
        if chain_pos[a] > chain_pos[u]:
            raise NotAncestorError(f"{a} is not an ancestor")
        if chain_pos[a] < chain_pos[u]:
            value = tables[chain_of[u]].query(chain_pos[a] + 1, chain_pos[u])
            best = value if best is None else op(best, value)
        touched += 1
        self._charge(ctx, 3 * touched)
        return best

    def path_max_key(self, u: int, a: int, ctx: TaskContext | None = None) -> int:
        """Largest edge key on the path from ``u`` up to its ancestor ``a``; 0 if ``u == a``."""
        best = self._extremum(u, a, self._max, max, ctx)
        return 0 if best is None else best

    def path_min_key(self, u: int, a: int, ctx: TaskContext | None = None) -> int | None:
        return self._extremum(u, a, self._min, min, ctx)

    def lca(self, u: int, w: int, ctx: TaskContext | None = None) -> int:
        t, depth = self.tree, self.depth
        chain_of, chain_pos, chains = self.hl.chain_of, self.hl.chain_pos, self.hl.chains
        touched = 1
        while chain_of[u] != chain_of[w]:
            tu, tw = chains[chain_of[u]][0], chains[chain_of[w]][0]
            if depth[tu] >= depth[tw]:
                u = t.parent[tu]
            else:
                w = t.parent[tw]
            touched += 1
        self._charge(ctx, touched)
        return u if chain_pos[u] <= chain_pos[w] else w

    def path_max(self, u: int, w: int, ctx: TaskContext | None = None) -> int:
        """Largest edge key on the tree path between any two vertices; 0 if equal."""
        a = self.lca(u, w, ctx)
        return max(self.path_max_key(u, a, ctx), self.path_max_key(w, a, ctx))


def build_index(t: SpanningTree, hl: HeavyLightInfo | None = None) -> PathExtremumIndex:
    return PathExtremumIndex(t, hl)


def path_max_key(idx: PathExtremumIndex, u: int, a: int) -> int:
    return idx.path_max_key(u, a)


@dataclass(frozen=True)
class TimeInterval:
    a: int
    b: int
    owner: int = -1
    edge: int = -1
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.a < 0 or self.a > self.b:
            raise ValueError(f"bad interval [{self.a}, {self.b}]")


def min_prefix_sum(seq: Sequence[int]) -> tuple[int, int]:
    """Minimum over nonempty prefix sums, with the earliest prefix length attaining it.

    The empty input reports the empty prefix ``(0, 0)``.
    """
    if not seq:
        return 0, 0
    best, where, running = None, 0, 0
    for i, x in enumerate(seq, start=1):
        running += x
        if best is None or running < best:
            best, where = running, i
    return best, where


def min_coverage(intervals: Iterable[TimeInterval], horizon: int) -> tuple[int, int]:
    """Smallest total multiplicity covering a point of ``[0, horizon]``, and the earliest such point.

    Closed intervals become ``(a, +mult)`` and ``(b+1, -mult)`` events, compressed per
    coordinate. Coverage is constant between consecutive event coordinates, so the
    candidates are the event coordinates inside the range plus ``t = 0`` when no interval
    starts there.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    delta: dict[int, int] = {}
    for iv in intervals:
        if iv.b > horizon:
            raise ValueError(f"interval [{iv.a}, {iv.b}] outside [0, {horizon}]")
        delta[iv.a] = delta.get(iv.a, 0) + iv.multiplicity
        if iv.b + 1 <= horizon:
            delta[iv.b + 1] = delta.get(iv.b + 1, 0) - iv.multiplicity
    coords = sorted(delta)
    if not coords or coords[0] > 0:
        return 0, 0
    value, length = min_prefix_sum([delta[c] for c in coords])
    return value, coords[length - 1]
