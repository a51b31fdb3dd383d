"""Recursive (2+eps)-approximate minimum cut on the simulated AMPC runtime.

Each recursion level draws ``b_k`` independent contraction orders of the current
instance. Every copy contributes its smallest singleton cut and is then contracted to
the next scheduled size and recursed on. Instances at or below the base threshold are
solved exactly on one machine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ampcut.graph import Graph, GraphError, assign_contraction_order, contract_prefix, require_connected
from ampcut.runtime import AmpcRuntime, AmpcStats, make_runtime
from ampcut.seeding import derive_seed
from ampcut.singleton import smallest_singleton_cut

MODES = ("boosted", "karger_stein")
MEMORY_CONSTANT = 8.0


@dataclass(frozen=True)
class ScheduleLevel:
    size: int  # n_k
    shrink: float  # x_k
    branching: int  # b_k
    elapsed: float  # t_k = n / n_k
    instances: int  # s_k


@dataclass
class Schedule:
    n: int
    epsilon: float
    mode: str
    base: int
    levels: list[ScheduleLevel]
    sizes: list[int]  # n_0, n_1, ..., ending with the first size at or below ``base``
    memory_constant: float = MEMORY_CONSTANT

    def check(self) -> list[str]:
        """Violated invariants, empty when the schedule is well formed."""
        bad = []
        d = self.epsilon / 3
        for k, lv in enumerate(self.levels):
            if lv.branching > math.ceil(lv.shrink ** (1 - d) - 1e-9):
                bad.append(f"level {k}: branching {lv.branching} above ceil(x^(1-eps/3))")
            if self.mode != "boosted":
                continue
            # the shrink bound carries the memory constant explicitly
            if lv.shrink > (self.memory_constant * lv.elapsed**d) ** (1 / (1 - d)) + 1e-9:
                bad.append(f"level {k}: shrink {lv.shrink:.3f} above the memory bound")
            if lv.instances > math.ceil(lv.elapsed ** (1 - d) - 1e-9):
                bad.append(f"level {k}: {lv.instances} instances above ceil(t^(1-eps/3))")
        sizes = self.sizes
        if any(b >= a for a, b in zip(sizes, sizes[1:])):
            bad.append("sizes do not strictly decrease")
        return bad


def base_threshold(n: int, epsilon: float) -> int:
    return min(64, max(16, math.ceil(n**epsilon)))


def make_schedule(
    n: int,
    epsilon: float,
    mode: str = "boosted",
    base: int | None = None,
    memory_constant: float = MEMORY_CONSTANT,
) -> Schedule:
    if n < 2:
        raise GraphError("need n >= 2")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    base = base_threshold(n, epsilon) if base is None else base
    if base < 2:
        raise ValueError("base threshold must be at least 2")
    d = epsilon / 3
    levels = []
    sizes = [n]
    size, instances = n, 1
    while size > base:
        elapsed = n / size
        if mode == "karger_stein":
            branching, shrink = 2, math.sqrt(2)
            nxt = min(size - 1, math.ceil(size / shrink))
        else:
            branching = max(2, math.floor(memory_constant * elapsed**d))
            if math.floor(size / branching ** (1 / (1 - d))) < 2:
                branching = max(2, math.floor((size / 2) ** (1 - d)))
            shrink = branching ** (1 / (1 - d))
            nxt = max(2, min(size - 1, math.floor(size / shrink)))
        levels.append(ScheduleLevel(size, shrink, branching, elapsed, instances))
        sizes.append(nxt)
        size, instances = nxt, instances * branching
    return Schedule(n, epsilon, mode, base, levels, sizes, memory_constant)


def default_trials(n: int) -> int:
    return max(1, math.ceil(4 * math.log2(max(n, 2)) ** 2))


@dataclass
class CutResult:
    value: int
    side: list[int]
    source: str
    trials_used: int = 1
    stats: AmpcStats = field(default_factory=AmpcStats)


def stoer_wagner(g: Graph) -> tuple[int, list[int]]:
    """Deterministic Stoer-Wagner on the capacity matrix; returns ``(value, side)``."""
    n = g.n
    if n < 2:
        raise GraphError("need n >= 2")
    require_connected(g)
    w = np.zeros((n, n), dtype=np.int64)
    for u, v, c in g.edges:
        w[u, v] += c
        w[v, u] += c
    groups = [[v] for v in range(n)]
    alive = np.ones(n, dtype=bool)
    best_value, best_side = None, None
    for _ in range(n - 1):
        start = int(np.flatnonzero(alive)[0])
        added = ~alive
        added[start] = True
        key = w[start].copy()
        prev = last = start
        cut = 0
        for _ in range(int(alive.sum()) - 1):
            masked = np.where(added, -1, key)
            nxt = int(np.argmax(masked))
            cut = int(masked[nxt])
            added[nxt] = True
            key += w[nxt]
            prev, last = last, nxt
        if best_value is None or cut < best_value:
            best_value, best_side = cut, sorted(groups[last])
        # merge the last vertex of the phase into the one before it
        w[prev] += w[last]
        w[:, prev] += w[:, last]
        w[prev, prev] = 0
        w[last] = 0
        w[:, last] = 0
        alive[last] = False
        groups[prev] += groups[last]
    return best_value, best_side


def exact_min_cut(g: Graph) -> CutResult:
    value, side = stoer_wagner(g)
    return CutResult(value, side, "base_exact")


def _order(g: Graph, seed: int):
    return assign_contraction_order(g, seed, "uniform" if g.is_unit else "capacity_biased")


def _recurse(g: Graph, k: int, sched: Schedule, seed: int, rt: AmpcRuntime) -> tuple[int, list[int], str]:
    sizes = sched.sizes
    if g.n <= sched.base or k >= len(sched.levels):
        value, side = rt.primitive("base-exact", lambda: {("base",): stoer_wagner(g)}, rounds=1)[("base",)]
        return value, side, "base_exact"
    target = min(sizes[k + 1], g.n - 1)
    best = None
    children = []
    for i in range(sched.levels[k].branching):
        crt = rt.fork()
        og = _order(g, derive_seed(seed, "keys", i))
        w = smallest_singleton_cut(og, crt)
        if best is None or w.value < best[0]:
            best = (w.value, w.side, f"singleton@{k}")
        small, mapping = crt.primitive("contract", lambda: {("contracted",): contract_prefix(og, target)})[
            ("contracted",)
        ]
        value, side, source = _recurse(small.coalesced(), k + 1, sched, derive_seed(seed, "copy", i), crt)
        if value < best[0]:
            inside = set(side)
            best = (value, [v for v in range(g.n) if mapping[v] in inside], source)
        children.append(crt)
    rt.join(children)
    return best


def ampc_min_cut(
    g: Graph,
    epsilon: float = 0.5,
    seed: int = 0,
    trials: int | None = None,
    mode: str = "boosted",
    base: int | None = None,
) -> CutResult:
    """Minimum over independent trials of the recursive contraction scheme."""
    if g.n < 2:
        raise GraphError("need n >= 2")
    require_connected(g)
    sched = make_schedule(g.n, epsilon, mode, base)
    rt = make_runtime(epsilon, g.n, g.m)
    work = g.coalesced()
    if not sched.levels:
        value, side, source = _recurse(work, 0, sched, seed, rt)
        return CutResult(value, side, source, 1, rt.stats())
    trials = default_trials(g.n) if trials is None else trials
    if trials < 1:
        raise ValueError("need at least one trial")
    best = None
    children = []
    for j in range(trials):
        crt = rt.fork()
        found = _recurse(work, 0, sched, derive_seed(seed, "trial", j), crt)
        if best is None or found[0] < best[0]:
            best = found
        children.append(crt)
    rt.join(children)
    value, side, source = best
    return CutResult(value, sorted(side), source, trials, rt.stats())
