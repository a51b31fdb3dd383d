import math
import random

import pytest
from corpus import small_graph

from ampcut.graph import Graph, GraphError, generate
from ampcut.mincut import ampc_min_cut, base_threshold, default_trials, exact_min_cut, make_schedule, stoer_wagner
from ampcut.oracles import brute_min_cut


def test_schedule_examples():
    assert make_schedule(32, 0.5).sizes == [32, 2]
    assert make_schedule(60, 0.5).sizes == [60, 4]
    assert make_schedule(1024, 0.5).sizes == [1024, 84, 4]
    assert make_schedule(8, 0.5, "karger_stein", base=2).sizes == [8, 6, 5, 4, 3, 2]
    assert make_schedule(16, 0.5).levels == []


@pytest.mark.parametrize("mode", ["boosted", "karger_stein"])
@pytest.mark.parametrize("n", [17, 50, 100, 1000, 10**4, 10**6])
@pytest.mark.parametrize("eps", [0.2, 0.5, 0.9])
def test_schedule_invariants(mode, n, eps):
    sched = make_schedule(n, eps, mode)
    assert sched.check() == []
    assert sched.sizes[0] == n and sched.sizes[-1] <= sched.base
    for lv in sched.levels:
        assert lv.branching >= 2


def test_schedule_errors():
    with pytest.raises(GraphError):
        make_schedule(1, 0.5)
    with pytest.raises(ValueError):
        make_schedule(10, 1.5)
    with pytest.raises(ValueError):
        make_schedule(10, 0.5, "nope")
    with pytest.raises(ValueError):
        make_schedule(10, 0.5, base=1)


def test_thresholds():
    assert base_threshold(4, 0.5) == 16
    assert base_threshold(10**6, 0.5) == 64
    assert default_trials(2) == 4
    assert default_trials(1024) == 400


def test_stoer_wagner_examples():
    assert stoer_wagner(generate("clique", 4))[0] == 3
    assert stoer_wagner(generate("path", 5))[0] == 1
    value, side = stoer_wagner(Graph(2, [(0, 1, 7)]))
    assert value == 7 and len(side) == 1


@pytest.mark.parametrize("seed", range(80))
def test_stoer_wagner_matches_brute(seed):
    g = small_graph(seed, 14)
    value, side = stoer_wagner(g)
    assert value == brute_min_cut(g).value == g.crossing_capacity(side)
    assert 0 < len(side) < g.n


def test_exact_result_source():
    res = exact_min_cut(generate("cycle", 6))
    assert res.value == 2 and res.source == "base_exact"


def test_small_input_is_exact():
    g = generate("clique", 10)
    res = ampc_min_cut(g, seed=3)
    assert res.value == 9 and res.source == "base_exact" and res.trials_used == 1


@pytest.mark.parametrize("base", [2, None])
def test_bridge_found(base):
    g = generate("two_cliques_bridge", size=10)
    for seed in range(50 if base == 2 else 10):
        res = ampc_min_cut(g, seed=seed, trials=16, base=base)
        assert res.value == 1 and g.crossing_capacity(res.side) == 1


def test_k4_recursion():
    g = generate("clique", 4)
    hits = sum(ampc_min_cut(g, seed=s, trials=32, base=2).value == 3 for s in range(50))
    assert hits >= 45


def test_karger_stein_mode():
    g = generate("two_cliques_bridge", size=5)
    res = ampc_min_cut(g, seed=1, trials=8, mode="karger_stein", base=2)
    assert res.value >= 1 and g.crossing_capacity(res.side) == res.value


@pytest.mark.parametrize("seed", range(15))
def test_sound_and_close(seed):
    rng = random.Random(seed)
    g = generate("gnp", rng.randint(17, 26), p=0.3, seed=seed, max_capacity=rng.choice([1, 3]))
    res = ampc_min_cut(g, seed=seed, trials=4)
    opt = stoer_wagner(g)[0]
    assert g.crossing_capacity(res.side) == res.value >= opt
    assert 0 < len(res.side) < g.n


def test_deterministic():
    g = generate("gnp", 20, p=0.3, seed=9)
    a = ampc_min_cut(g, seed=4, trials=3)
    b = ampc_min_cut(g, seed=4, trials=3)
    assert (a.value, a.side, a.source, a.stats) == (b.value, b.side, b.source, b.stats)


def test_trials_do_not_change_rounds():
    g = generate("gnp", 32, p=0.3, seed=2)
    r1 = ampc_min_cut(g, seed=0, trials=1).stats
    r3 = ampc_min_cut(g, seed=0, trials=3).stats
    assert r1.rounds == r3.rounds and r3.adaptive_queries > r1.adaptive_queries


def test_errors():
    with pytest.raises(GraphError, match="disconnected"):
        ampc_min_cut(Graph(4, [(0, 1, 1), (2, 3, 1)]))
    with pytest.raises(GraphError):
        ampc_min_cut(Graph(1, []))
    with pytest.raises(ValueError):
        ampc_min_cut(generate("clique", 20), trials=0)
    assert math.isfinite(ampc_min_cut(generate("clique", 20), trials=1).value)
