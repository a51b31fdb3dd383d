import random

import pytest
from corpus import small_graph

from ampcut.graph import Graph, OrderedGraph, assign_contraction_order, generate
from ampcut.oracles import interval_mismatches, simulate_contraction
from ampcut.pathquery import TimeInterval
from ampcut.runtime import make_runtime
from ampcut.singleton import analyze, bag, edge_intervals, level_min, smallest_singleton_cut

TRIANGLE = OrderedGraph(Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]), [1, 2, 3])


def _all_intervals(an):
    return [iv for owners in an.intervals.values() for found in owners.values() for iv in found]


def test_triangle_example():
    an = analyze(TRIANGLE)
    assert an.labeling.level == [3, 2, 1]
    assert an.leader_times.ldr_time == [0, 1, 1]
    w = an.witness
    assert (w.value, w.time, w.side) == (2, 0, [2])


def test_triangle_edge_intervals():
    ldr = [0, 1, 1]
    # level 1: edge (0,2), both ends under root 2; 0 joins at time 2, capped by ldr_time(2) = 1
    assert edge_intervals(1, 2, 1, 2, 2, 2, 0, ldr) == [TimeInterval(0, 1, 2, 2)]
    assert edge_intervals(1, 2, 1, None, None, 0, 0, ldr) == []
    # level 2: edge (1,2) has x=1 as root, y=2 outside the level-2 forest
    assert edge_intervals(2, 1, 1, 1, None, 0, 0, ldr) == [TimeInterval(0, 1, 1, 1)]
    # level 2: edge (0,1) with both ends under root 1; 0 joins at time 1
    assert edge_intervals(2, 0, 1, 1, 1, 1, 0, ldr) == [TimeInterval(0, 0, 1, 0)]


def test_triangle_level_min():
    an = analyze(TRIANGLE)
    assert level_min(1, [2], an.intervals[1], an.leader_times.ldr_time) == (2, 0, 2)
    assert level_min(2, [1], an.intervals[2], an.leader_times.ldr_time) == (2, 0, 1)
    assert an.per_level[1] == (2, 0, 2) and an.per_level[2] == (2, 0, 1)


def test_path_and_star():
    path = generate("path", 3)
    assert smallest_singleton_cut(assign_contraction_order(path, 0)).value == 1
    star = generate("star", 6)
    for seed in range(10):
        w = smallest_singleton_cut(assign_contraction_order(star, seed))
        assert w.value == 1 and star.crossing_capacity(w.side) == 1


def test_two_vertices():
    w = smallest_singleton_cut(OrderedGraph(Graph(2, [(0, 1, 3)]), [1]))
    assert w.value == 3 and len(w.side) == 1


def test_bag_monotone():
    rng = random.Random(5)
    g = generate("gnp", 30, p=0.2, seed=5)
    an = analyze(assign_contraction_order(g, 5))
    for _ in range(50):
        v = rng.randrange(g.n)
        t1 = rng.randrange(g.m)
        t2 = rng.randrange(t1, g.m + 1)
        assert set(bag(an.tree, v, t1)) <= set(bag(an.tree, v, t2))


@pytest.mark.parametrize("seed", range(60))
def test_matches_contraction_sweep(seed):
    g = small_graph(seed)
    og = assign_contraction_order(g, seed, "uniform" if g.is_unit else "capacity_biased")
    an = analyze(og)
    trace = simulate_contraction(og, an.labeling.level)
    w = an.witness
    assert w.value == trace.min_value
    assert g.crossing_capacity(w.side) == w.value and 0 < len(w.side) < g.n
    assert trace.bag(w.leader, w.time) == set(w.side)
    assert an.leader_times.ldr_time == trace.ldr_time
    assert not interval_mismatches(_all_intervals(an), an.leader_times.ldr_time, trace)


@pytest.mark.parametrize("seed", range(20))
def test_leader_law_and_disjoint_bags(seed):
    g = small_graph(1000 + seed)
    og = assign_contraction_order(g, seed)
    an = analyze(og)
    level, ldr = an.labeling.level, an.leader_times.ldr_time
    for v in range(g.n):
        # v is the strict minimum-level member of its bag up to its leader time
        assert all(level[u] > level[v] for u in bag(an.tree, v, ldr[v]) if u != v)
        if ldr[v] < an.leader_times.cap:
            assert any(level[u] < level[v] for u in bag(an.tree, v, ldr[v] + 1))
    # at one level, the maximal bags of different leaders are disjoint
    for i in set(level):
        bags = [set(bag(an.tree, v, ldr[v])) for v in range(g.n) if level[v] == i]
        for a in range(len(bags)):
            for b in range(a + 1, len(bags)):
                assert not bags[a] & bags[b]


def test_mutation_is_detected():
    # dropping one interval must show up as a mismatch against the sweep
    for seed in range(20):
        g = small_graph(seed)
        og = assign_contraction_order(g, seed)
        an = analyze(og)
        ivs = _all_intervals(an)
        if not ivs:
            continue
        trace = simulate_contraction(og, an.labeling.level)
        assert interval_mismatches(ivs[1:], an.leader_times.ldr_time, trace)
        shifted = [TimeInterval(ivs[0].a, ivs[0].b, ivs[0].owner, (ivs[0].edge + 1) % g.m)] + ivs[1:]
        if shifted[0].edge != ivs[0].edge:
            assert interval_mismatches(shifted, an.leader_times.ldr_time, trace)


def test_runtime_accounting():
    g = generate("gnp", 40, p=0.2, seed=1)
    rt = make_runtime(0.5, g.n, g.m)
    analyze(assign_contraction_order(g, 1), rt)
    st = rt.stats()
    assert st.rounds > 0 and st.adaptive_queries > 0
    assert "leader-times" in [label for label, _ in rt.log]
