"""Generalized low-depth tree decomposition.

The labeling is built from a heavy-light decomposition: every heavy path is replaced by
an almost complete binary tree whose leaves are the path's vertices in order (a
*binarized path*), light edges hang the binarized paths together into the *expanded
meta tree*, and a vertex is labelled with the expanded-tree depth of the highest
binarized-path node whose right child has it as leftmost leaf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from ampcut.graph import DisjointSet, SpanningTree
from ampcut.runtime import AmpcRuntime, TaskContext, make_runtime


class DecompositionError(AssertionError):
    pass


def height_bound(n: int) -> int:
    return (int(math.floor(math.log2(max(n, 1)))) + 2) ** 2


@dataclass
class HeavyLightInfo:
    heavy_child: list[int]  # -1 for leaves
    is_heavy: list[bool]  # edge to the parent; False for the root
    chains: list[list[int]]  # maximal heavy chains, root side first; chains[0] holds the root
    chain_of: list[int]
    chain_pos: list[int]

    @property
    def heavy_paths(self) -> list[list[int]]:
        return [c for c in self.chains if len(c) > 1]


def heavy_light(t: SpanningTree) -> HeavyLightInfo:
    n = t.n
    size = t.subtree_size
    heavy_child = [-1] * n
    for v in range(n):
        kids = t.children[v]
        if kids:
            # largest subtree, ties to the smallest vertex id
            heavy_child[v] = min(kids, key=lambda c: (-size[c], c))
    is_heavy = [False] * n
    for v in range(n):
        if heavy_child[v] >= 0:
            is_heavy[heavy_child[v]] = True
    chains: list[list[int]] = []
    chain_of = [-1] * n
    chain_pos = [-1] * n
    for v in t.order:
        if is_heavy[v]:
            continue
        chain = []
        u = v
        while u >= 0:
            chain_of[u] = len(chains)
            chain_pos[u] = len(chain)
            chain.append(u)
            u = heavy_child[u]
        chains.append(chain)
    return HeavyLightInfo(heavy_child, is_heavy, chains, chain_of, chain_pos)


@dataclass
class MetaTree:
    """One meta vertex per heavy chain (single-vertex chains included)."""

    chains: list[list[int]]
    parent: list[int]  # meta parent, -1 at the root
    attach: list[int]  # original parent vertex of the chain top, -1 at the root
    children: list[list[int]]
    root: int = 0

    def depth(self) -> int:
        depth = [1] * len(self.chains)
        best = 1
        for c in range(len(self.chains)):  # chains are created in BFS order
            if self.parent[c] >= 0:
                depth[c] = depth[self.parent[c]] + 1
                best = max(best, depth[c])
        return best


def build_meta_tree(t: SpanningTree, hl: HeavyLightInfo) -> MetaTree:
    k = len(hl.chains)
    parent = [-1] * k
    attach = [-1] * k
    children: list[list[int]] = [[] for _ in range(k)]
    for c, chain in enumerate(hl.chains):
        p = t.parent[chain[0]]
        if p >= 0:
            attach[c] = p
            parent[c] = hl.chain_of[p]
            children[parent[c]].append(c)
    return MetaTree(hl.chains, parent, attach, children, hl.chain_of[t.root])


def node_depth(i: int) -> int:
    """Depth of heap node ``i`` inside its binarized path (root = 1)."""
    return i.bit_length()


def leftmost_leaf(node: int, leaves: int) -> int:
    last = 2 * leaves - 1
    while 2 * node <= last:
        node *= 2
    return node


def leaf_node(leaves: int, pos: int) -> int:
    """Heap index of the ``pos``-th leaf (0-based) in pre-order, by descent.

    Every internal node of the heap on ``2L-1`` nodes has two children, so a subtree
    with ``s`` nodes has ``(s+1)//2`` leaves.
    """
    if not 0 <= pos < leaves:
        raise IndexError(pos)
    last = 2 * leaves - 1
    node = 1
    while 2 * node <= last:
        left = 2 * node
        left_leaves = (_subtree_nodes(left, last) + 1) // 2
        if pos < left_leaves:
            node = left
        else:
            pos -= left_leaves
            node = left + 1
    return node


def _subtree_nodes(node: int, last: int) -> int:
    count = 0
    lo = hi = node
    while lo <= last:
        count += min(hi, last) - lo + 1
        lo, hi = 2 * lo, 2 * hi + 1
    return count


def label_node(leaves: int, leaf: int) -> int:
    """Highest ancestor whose right child has ``leaf`` as leftmost leaf, else ``leaf``."""
    ancestors = []
    a = leaf >> 1
    while a:
        ancestors.append(a)
        a >>= 1
    for a in reversed(ancestors):
        if leftmost_leaf(2 * a + 1, leaves) == leaf:
            return a
    return leaf


@dataclass
class BinarizedPath:
    leaves: int
    leaf_of: list[int]  # path position -> heap node

    @property
    def node_count(self) -> int:
        return 2 * self.leaves - 1

    def parent(self, i: int) -> int:
        return i // 2

    def depth_in_path(self, i: int) -> int:
        return node_depth(i)

    def preorder(self) -> list[int]:
        out, stack, last = [], [1], self.node_count
        while stack:
            i = stack.pop()
            out.append(i)
            if 2 * i + 1 <= last:
                stack.append(2 * i + 1)
                stack.append(2 * i)
        return out

    def is_leaf(self, i: int) -> bool:
        return 2 * i > self.node_count

    def label_node(self, pos: int) -> int:
        return label_node(self.leaves, self.leaf_of[pos])


@lru_cache(maxsize=256)
def _preorder_leaves(leaves: int) -> tuple[int, ...]:
    bp = BinarizedPath(leaves, [])
    return tuple(i for i in bp.preorder() if bp.is_leaf(i))


def binarize_path(path: list[int] | int) -> BinarizedPath:
    leaves = path if isinstance(path, int) else len(path)
    if leaves < 1:
        raise ValueError("path must be nonempty")
    return BinarizedPath(leaves, list(_preorder_leaves(leaves)))


@dataclass
class LevelLabeling:
    level: list[int]
    h: int

    def dump(self) -> str:
        lines = [f"h {self.h}"] + [f"v {v} {lvl}" for v, lvl in enumerate(self.level)]
        return "\n".join(lines) + "\n"


def label_vertices(mt: MetaTree, bps: list[BinarizedPath]) -> LevelLabeling:
    n = sum(len(c) for c in mt.chains)
    root_depth = [1] * len(mt.chains)
    pos_of: dict[int, tuple[int, int]] = {}
    for c, chain in enumerate(mt.chains):
        for i, v in enumerate(chain):
            pos_of[v] = (c, i)
    for c in range(len(mt.chains)):  # parents precede children
        if mt.parent[c] >= 0:
            pc, ppos = pos_of[mt.attach[c]]
            root_depth[c] = root_depth[pc] + node_depth(bps[pc].leaf_of[ppos])
    level = [0] * n
    for c, chain in enumerate(mt.chains):
        for i, v in enumerate(chain):
            level[v] = root_depth[c] + node_depth(bps[c].label_node(i)) - 1
    return LevelLabeling(level, max(level, default=1))


def low_depth_decomp(t: SpanningTree, rt: AmpcRuntime | None = None) -> LevelLabeling:
    """Decompose ``t`` through AMPC rounds; the round count does not depend on ``n``."""
    rt = rt or make_runtime(0.5, t.n)
    n = t.n
    rt.load({("parent", v): t.parent[v] for v in range(n)})
    rt.load({("size", v): t.subtree_size[v] for v in range(n)})
    rt.load({("children", v): tuple(t.children[v]) for v in range(n)})

    def choose_heavy(ctx: TaskContext, v: int) -> None:
        best, best_size = -1, -1
        for c in ctx.read(("children", v)):
            size = ctx.read(("size", c))
            if size > best_size or (size == best_size and c < best):
                best, best_size = c, size
        ctx.write(("heavy", v), best)

    rt.map_round("heavy-child", range(n), choose_heavy)

    def assemble_chains() -> dict:
        heavy = [rt.table[("heavy", v)] for v in range(n)]
        on_chain = [False] * n
        for v in range(n):
            if heavy[v] >= 0:
                on_chain[heavy[v]] = True
        out: dict = {}
        cid = 0
        for v in t.order:
            if on_chain[v]:
                continue
            pos, u = 0, v
            while u >= 0:
                out[("chain", u)] = (cid, pos)
                pos += 1
                u = heavy[u]
            out[("chain_info", cid)] = (v, pos)
            cid += 1
        out[("chain_count",)] = cid
        return out

    # connectivity over heavy edges plus a sort by depth
    chains = rt.primitive("heavy-chains", assemble_chains)[("chain_count",)]

    def root_depth(ctx: TaskContext, cid: int) -> None:
        depth = 1
        c = cid
        while True:
            top, _ = ctx.read(("chain_info", c))
            p = ctx.read(("parent", top))
            if p < 0:
                break
            pc, ppos = ctx.read(("chain", p))
            _, plen = ctx.read(("chain_info", pc))
            depth += node_depth(leaf_node(plen, ppos))
            c = pc
        ctx.write(("root_depth", cid), depth)

    rt.map_round("meta-depth", range(chains), root_depth)

    def assign_level(ctx: TaskContext, v: int) -> None:
        cid, pos = ctx.read(("chain", v))
        _, length = ctx.read(("chain_info", cid))
        base = ctx.read(("root_depth", cid))
        ctx.scratch(2 * length.bit_length())
        ctx.write(("level", v), base + node_depth(label_node(length, leaf_node(length, pos))) - 1)

    rt.map_round("label", range(n), assign_level)
    level = [rt.table[("level", v)] for v in range(n)]
    return LevelLabeling(level, max(level, default=1))


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


def validate_decomposition(t: SpanningTree, lab: LevelLabeling) -> ValidationReport:
    n = t.n
    report = ValidationReport(True)
    if len(lab.level) != n:
        report.violations.append(f"labeling covers {len(lab.level)} of {n} vertices")
    elif any(not 1 <= x <= lab.h for x in lab.level):
        report.violations.append("label outside [1, h]")
    if lab.h > height_bound(n):
        report.violations.append(f"height {lab.h} exceeds bound {height_bound(n)}")
    if report.violations:
        report.ok = False
        return report
    level = lab.level
    for i in range(1, lab.h + 1):
        dsu = DisjointSet(n)
        for v in range(n):
            p = t.parent[v]
            if p >= 0 and level[v] >= i and level[p] >= i:
                dsu.union(v, p)
        count: dict[int, int] = {}
        for v in range(n):
            if level[v] == i:
                r = dsu.find(v)
                count[r] = count.get(r, 0) + 1
        for r, c in count.items():
            if c > 1:
                report.violations.append(f"level {i}: component of vertex {r} has {c} vertices labelled {i}")
    report.ok = not report.violations
    return report


def boundary_edges(
    t: SpanningTree, lab: LevelLabeling, component, level: int | None = None, strict: bool = True
) -> list[tuple[int, int]]:
    """Tree edges ``(inside, outside)`` leaving a component of the forest on labels >= level.

    A valid decomposition never yields more than two; ``strict`` turns that into an error.
    """
    inside = set(component)
    if level is None:
        level = min(lab.level[v] for v in inside)
    out = []
    for v in inside:
        for w in t.neighbours(v):
            if w not in inside:
                if lab.level[w] >= level:
                    raise DecompositionError(f"vertex set is not a component at level {level}")
                out.append((v, w))
    if strict and len(out) > 2:
        raise DecompositionError(f"{len(out)} boundary edges at level {level}")
    return sorted(out)


def level_components(t: SpanningTree, lab: LevelLabeling, level: int) -> list[list[int]]:
    """Components of the forest induced on vertices labelled ``>= level``."""
    n = t.n
    dsu = DisjointSet(n)
    for v in range(n):
        p = t.parent[v]
        if p >= 0 and lab.level[v] >= level and lab.level[p] >= level:
            dsu.union(v, p)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        if lab.level[v] >= level:
            groups.setdefault(dsu.find(v), []).append(v)
    return sorted(groups.values())


def decomposition_forest(t: SpanningTree, lab: LevelLabeling) -> list[int]:
    """Parent pointers of the decomposition forest.

    ``up[v]`` is the vertex labelled ``< level[v]`` that first joins ``v``'s component
    when levels are added from ``h`` down to 1, or -1 if none does. For ``i <= level[x]``
    the component of ``x`` in the forest on labels ``>= i`` has a level-``i`` vertex iff
    one appears on the chain ``x, up[x], up[up[x]], ...``, and then it is that vertex.
    """
    n = t.n
    level = lab.level
    by_level: list[list[int]] = [[] for _ in range(lab.h + 2)]
    for v in range(n):
        by_level[level[v]].append(v)
    dsu = DisjointSet(n)
    top = list(range(n))  # dsu root -> current minimum-label vertex
    up = [-1] * n
    for i in range(lab.h, 0, -1):
        for v in by_level[i]:
            for w in t.neighbours(v):
                if level[w] > i:
                    up[top[dsu.find(w)]] = v
                    dsu.union(w, v)
                    top[dsu.find(v)] = v
    return up
