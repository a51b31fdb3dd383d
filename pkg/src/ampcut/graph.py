"""Graph representation, contraction orders, MST, prefix contraction and I/O."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ampcut.seeding import derive_seed

Edge = tuple[int, int, int]


class GraphError(ValueError):
    pass


class DisconnectedGraphError(GraphError):
    def __init__(self, message: str = "graph is disconnected") -> None:
        super().__init__(message)


class GraphParseError(GraphError):
    def __init__(self, lineno: int, reason: str) -> None:
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


class DisjointSet:
    __slots__ = ("parent", "size", "count")

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True


@dataclass
class Graph:
    """Undirected multigraph on vertices ``0..n-1`` with positive integer capacities."""

    n: int
    edges: list[Edge] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("graph needs at least one vertex")
        for u, v, c in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if c < 1:
                raise GraphError(f"edge ({u}, {v}) has capacity {c} < 1")

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_unit(self) -> bool:
        return all(c == 1 for _, _, c in self.edges)

    def total_capacity(self) -> int:
        return sum(c for _, _, c in self.edges)

    def crossing_capacity(self, side: Iterable[int]) -> int:
        inside = set(side)
        return sum(c for u, v, c in self.edges if (u in inside) != (v in inside))

    def crossing_edges(self, side: Iterable[int]) -> list[int]:
        inside = set(side)
        return [i for i, (u, v, _) in enumerate(self.edges) if (u in inside) != (v in inside)]

    def coalesced(self) -> Graph:
        """Merge parallel edges, summing their capacities."""
        merged: dict[tuple[int, int], int] = {}
        for u, v, c in self.edges:
            key = (u, v) if u < v else (v, u)
            merged[key] = merged.get(key, 0) + c
        return Graph(self.n, [(u, v, c) for (u, v), c in sorted(merged.items())])

    def induced(self, vertices: Sequence[int]) -> tuple[Graph, list[int]]:
        """Subgraph on ``vertices`` relabelled ``0..k-1``; returns it with the local->global map."""
        local = {v: i for i, v in enumerate(vertices)}
        edges = [
            (local[u], local[v], c) for u, v, c in self.edges if u in local and v in local
        ]
        return Graph(len(vertices), edges), list(vertices)

    def to_text(self) -> str:
        lines = [f"p {self.n} {self.m}"]
        for u, v, c in self.edges:
            lines.append(f"e {u} {v}" if c == 1 else f"e {u} {v} {c}")
        return "\n".join(lines) + "\n"


@dataclass
class OrderedGraph:
    """A graph with an injective contraction-order key per edge."""

    graph: Graph
    keys: list[int]

    def __post_init__(self) -> None:
        if len(self.keys) != self.graph.m:
            raise GraphError("one key per edge required")
        bound = self.graph.n ** 3
        if len(set(self.keys)) != len(self.keys):
            raise GraphError("contraction keys must be distinct")
        if any(not (1 <= k <= bound) for k in self.keys):
            raise GraphError(f"contraction keys must lie in [1, {bound}]")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def max_key(self) -> int:
        return max(self.keys, default=0)

    def edges_by_key(self) -> list[int]:
        return sorted(range(self.graph.m), key=self.keys.__getitem__)


@dataclass
class SpanningTree:
    """Rooted spanning tree. ``parent[root] == -1``; keys/edge ids refer to the parent edge."""

    root: int
    parent: list[int]
    parent_key: list[int]
    parent_edge: list[int]
    children: list[list[int]]
    subtree_size: list[int]
    order: list[int]  # BFS order from the root

    @property
    def n(self) -> int:
        return len(self.parent)

    def tree_edges(self) -> list[tuple[int, int, int]]:
        """``(child, parent, key)`` for every non-root vertex."""
        return [(v, p, self.parent_key[v]) for v, p in enumerate(self.parent) if p >= 0]

    def depth(self) -> list[int]:
        depth = [0] * self.n
        for v in self.order:
            if self.parent[v] >= 0:
                depth[v] = depth[self.parent[v]] + 1
        return depth

    def neighbours(self, v: int) -> list[int]:
        p = self.parent[v]
        return ([p] if p >= 0 else []) + self.children[v]

    @classmethod
    def from_parent_keys(cls, parent: Sequence[int], keys: Sequence[int] | None = None) -> SpanningTree:
        """Build a tree from a parent array (root has parent -1); keys default to ``1..n-1``."""
        n = len(parent)
        roots = [v for v in range(n) if parent[v] < 0]
        if len(roots) != 1:
            raise GraphError("parent array must contain exactly one root")
        if keys is None:
            keys = [0 if parent[v] < 0 else v for v in range(n)]
        adjacency: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
        for v in range(n):
            if parent[v] >= 0:
                adjacency[v].append((parent[v], keys[v], v))
                adjacency[parent[v]].append((v, keys[v], v))
        return _root_tree(n, adjacency, roots[0])


def _root_tree(n: int, adjacency: list[list[tuple[int, int, int]]], root: int) -> SpanningTree:
    parent = [-1] * n
    parent_key = [0] * n
    parent_edge = [-1] * n
    children: list[list[int]] = [[] for _ in range(n)]
    seen = [False] * n
    seen[root] = True
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, key, eid in sorted(adjacency[u]):
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                parent_key[v] = key
                parent_edge[v] = eid
                children[u].append(v)
                order.append(v)
                queue.append(v)
    if len(order) != n:
        raise DisconnectedGraphError()
    size = [1] * n
    for v in reversed(order):
        if parent[v] >= 0:
            size[parent[v]] += size[v]
    return SpanningTree(root, parent, parent_key, parent_edge, children, size, order)


def parse_graph(text: str) -> Graph:
    n: int | None = None
    declared_m = 0
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphParseError(lineno, "duplicate header")
            if len(parts) != 3:
                raise GraphParseError(lineno, "malformed header, expected 'p <n> <m>'")
            try:
                n, declared_m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError(lineno, "malformed header, expected integers") from None
            if n <= 0:
                raise GraphParseError(lineno, "vertex count must be positive")
            if declared_m < 0:
                raise GraphParseError(lineno, "edge count must be nonnegative")
        elif tag == "e":
            if n is None:
                raise GraphParseError(lineno, "edge line before header")
            if len(parts) not in (3, 4):
                raise GraphParseError(lineno, "malformed edge line, expected 'e <u> <v> [capacity]'")
            try:
                u, v = int(parts[1]), int(parts[2])
                c = int(parts[3]) if len(parts) == 4 else 1
            except ValueError:
                raise GraphParseError(lineno, "malformed edge line, expected integers") from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphParseError(lineno, f"vertex id out of range for n={n}")
            if u == v:
                raise GraphParseError(lineno, f"self-loop at vertex {u}")
            if c < 1:
                raise GraphParseError(lineno, "capacity must be a positive integer")
            edges.append((u, v, c))
        else:
            raise GraphParseError(lineno, f"unknown line type {tag!r}")
    if n is None:
        raise GraphParseError(0, "missing header")
    if len(edges) != declared_m:
        raise GraphParseError(0, f"header declares {declared_m} edges, found {len(edges)}")
    return Graph(n, edges)


def read_graph(path) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(g.to_text())


MODELS = ("path", "star", "cycle", "clique", "gnp", "two_cliques_bridge")


def generate(model: str, n: int | None = None, *, p: float = 0.5, size: int | None = None,
             seed: int = 0, max_capacity: int = 1) -> Graph:
    """Deterministic connected test graphs.

    ``two_cliques_bridge`` takes ``size`` (vertices per clique; ``n`` is accepted as the
    total and halved). ``max_capacity > 1`` draws capacities uniformly from
    ``1..max_capacity``.
    """
    if model == "two_cliques_bridge":
        if size is None:
            if n is None or n % 2:
                raise GraphError("two_cliques_bridge needs size or an even n")
            size = n // 2
        if size < 2:
            raise GraphError("two_cliques_bridge needs size >= 2")
        edges = _clique_edges(range(size)) + _clique_edges(range(size, 2 * size))
        edges.append((0, size))
        total = 2 * size
    else:
        if n is None or n < 2:
            raise GraphError(f"{model} needs n >= 2")
        total = n
        if model == "path":
            edges = [(i, i + 1) for i in range(n - 1)]
        elif model == "star":
            edges = [(0, i) for i in range(1, n)]
        elif model == "cycle":
            if n < 3:
                raise GraphError("cycle needs n >= 3")
            edges = [(i, (i + 1) % n) for i in range(n)]
        elif model == "clique":
            edges = _clique_edges(range(n))
        elif model == "gnp":
            if not 0.0 <= p <= 1.0:
                raise GraphError("gnp needs 0 <= p <= 1")
            edges = _gnp_edges(n, p, seed)
        else:
            raise GraphError(f"unknown model {model!r}")
    rng = np.random.default_rng(derive_seed(seed, "capacities"))
    if max_capacity > 1:
        caps = rng.integers(1, max_capacity + 1, size=len(edges)).tolist()
    else:
        caps = [1] * len(edges)
    return Graph(total, [(u, v, c) for (u, v), c in zip(edges, caps)])


def _clique_edges(vertices) -> list[tuple[int, int]]:
    vs = list(vertices)
    return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


def _gnp_edges(n: int, p: float, seed: int, attempts: int = 32) -> list[tuple[int, int]]:
    rng = np.random.default_rng(derive_seed(seed, "gnp"))
    pairs = _clique_edges(range(n))
    edges: list[tuple[int, int]] = []
    for _ in range(attempts):
        mask = rng.random(len(pairs)) < p
        edges = [e for e, keep in zip(pairs, mask) if keep]
        if connected_components(Graph(n, [(u, v, 1) for u, v in edges])).count == 1:
            return edges
    # Still disconnected: chain the components through their smallest vertices.
    labels = connected_components(Graph(n, [(u, v, 1) for u, v in edges]))
    heads = [min(group) for group in labels.groups()]
    return edges + [(heads[i], heads[i + 1]) for i in range(len(heads) - 1)]


def assign_contraction_order(g: Graph, seed: int, mode: str = "uniform") -> OrderedGraph:
    """Draw an injective contraction key in ``1..m`` for every edge.

    ``uniform`` ranks a random permutation. ``capacity_biased`` ranks exponential
    variates with rate equal to the capacity, so key order is a weighted Karger order.
    """
    m = g.m
    if m > g.n ** 3:
        raise GraphError("too many parallel edges for keys in [1, n^3]; coalesce first")
    rng = np.random.default_rng(seed)
    if mode == "uniform":
        ranks = rng.permutation(m)
    elif mode == "capacity_biased":
        caps = np.fromiter((c for _, _, c in g.edges), dtype=float, count=m)
        draws = rng.exponential(1.0 / caps) if m else np.empty(0)
        ranks = np.empty(m, dtype=np.int64)
        ranks[np.argsort(draws, kind="stable")] = np.arange(m)
    else:
        raise ValueError(f"unknown contraction mode {mode!r}")
    return OrderedGraph(g, (ranks + 1).tolist())


def kruskal_mst(og: OrderedGraph, root: int = 0) -> SpanningTree:
    g = og.graph
    dsu = DisjointSet(g.n)
    adjacency: list[list[tuple[int, int, int]]] = [[] for _ in range(g.n)]
    taken = 0
    for eid in og.edges_by_key():
        u, v, _ = g.edges[eid]
        if dsu.union(u, v):
            key = og.keys[eid]
            adjacency[u].append((v, key, eid))
            adjacency[v].append((u, key, eid))
            taken += 1
            if taken == g.n - 1:
                break
    if taken != g.n - 1:
        raise DisconnectedGraphError()
    return _root_tree(g.n, adjacency, root)


def contract_prefix(og: OrderedGraph, target: int) -> tuple[Graph, list[int]]:
    """Contract edges in key order until ``target`` supervertices remain.

    Returns the contracted multigraph (self-loops dropped, parallel edges kept) and
    the vertex -> supervertex map. Supervertices are numbered by smallest member.
    """
    g = og.graph
    if not 2 <= target <= g.n:
        raise ValueError(f"target must lie in [2, {g.n}], got {target}")
    dsu = DisjointSet(g.n)
    if dsu.count > target:
        for eid in og.edges_by_key():
            u, v, _ = g.edges[eid]
            dsu.union(u, v)
            if dsu.count == target:
                break
    if dsu.count != target:
        raise DisconnectedGraphError()
    index: dict[int, int] = {}
    mapping = [0] * g.n
    for v in range(g.n):
        mapping[v] = index.setdefault(dsu.find(v), len(index))
    edges = [(mapping[u], mapping[v], c) for u, v, c in g.edges if mapping[u] != mapping[v]]
    return Graph(target, edges), mapping


@dataclass
class ComponentLabels:
    labels: list[int]
    count: int

    def groups(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for v, c in enumerate(self.labels):
            out[c].append(v)
        return out


def connected_components(g: Graph) -> ComponentLabels:
    """Component ids are assigned in order of each component's smallest vertex."""
    dsu = DisjointSet(g.n)
    for u, v, _ in g.edges:
        dsu.union(u, v)
    index: dict[int, int] = {}
    labels = [index.setdefault(dsu.find(v), len(index)) for v in range(g.n)]
    return ComponentLabels(labels, len(index))


def require_connected(g: Graph) -> None:
    if connected_components(g).count != 1:
        raise DisconnectedGraphError()
