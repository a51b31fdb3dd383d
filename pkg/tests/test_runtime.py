import math

import pytest

from ampcut.runtime import (
    AmpcConfig,
    BudgetExceeded,
    NondeterminismError,
    make_runtime,
    run_round,
    words,
)


def test_config_budgets():
    cfg = AmpcConfig(0.5, 100)
    assert cfg.local_budget == 80
    assert cfg.primitive_rounds == 2
    assert cfg.total_budget >= 1
    with pytest.raises(ValueError):
        AmpcConfig(1.0, 10)
    with pytest.raises(ValueError):
        AmpcConfig(0.5, 0)


def test_single_write():
    rt = make_runtime(0.5, 16)
    rt.run_round([lambda ctx: ctx.write("x", 1)])
    assert rt.table == {"x": 1}
    assert rt.stats().rounds == 1


def test_idempotent_writes_accepted():
    rt = make_runtime(0.5, 16)
    rt.run_round([lambda ctx: ctx.write("x", 1), lambda ctx: ctx.write("x", 1)])
    assert rt.table["x"] == 1


def test_conflicting_writes():
    rt = make_runtime(0.5, 16)
    with pytest.raises(NondeterminismError):
        rt.run_round([lambda ctx: ctx.write("x", 1), lambda ctx: ctx.write("x", 2)])


def test_empty_run_stats():
    st = make_runtime(0.5, 16).stats()
    assert st.rounds == 0 and st.adaptive_queries == 0


def test_query_counting():
    rt = make_runtime(0.5, 16)
    rt.load({"a": 1, "b": 2})

    def task(ctx):
        ctx.read("a")
        ctx.read("b")

    rt.run_round([task, task, task])
    assert rt.stats().adaptive_queries == 6


def test_same_round_writes_invisible():
    rt = make_runtime(0.5, 16)
    seen = []

    def task(ctx):
        ctx.write("k", 7)
        seen.append(ctx.read("k", "missing"))

    rt.run_round([task])
    assert seen == ["missing"]
    rt.run_round([lambda ctx: seen.append(ctx.read("k"))])
    assert seen == ["missing", 7]


def test_run_round_is_pure():
    table = {"a": 3}
    writes, account = run_round([lambda ctx: ctx.write("b", ctx.read("a") + 1)], table, AmpcConfig(0.5, 4))
    assert writes == {"b": 4} and table == {"a": 3}
    assert account.tasks == 1 and account.queries == 1


def test_budget_recorded_or_strict():
    big = tuple(range(200))
    rt = make_runtime(0.5, 16)
    rt.run_round([lambda ctx: ctx.write("x", big)], "big")
    assert rt.stats().budget_violations == 1
    assert rt.violations[0].label == "big" and rt.violations[0].round == 1
    strict = make_runtime(0.5, 16, strict=True)
    with pytest.raises(BudgetExceeded):
        strict.run_round([lambda ctx: ctx.write("x", big)])


def test_scratch_counts_toward_peak():
    rt = make_runtime(0.5, 16)
    rt.run_round([lambda ctx: ctx.scratch(10)])
    assert rt.stats().peak_task_words == 10


def test_primitive_charges_ceil_inverse_epsilon():
    for eps in (0.3, 0.5, 0.9):
        rt = make_runtime(eps, 16)
        out = rt.primitive("sort", lambda: {"s": (1, 2, 3)})
        assert out == {"s": (1, 2, 3)} and rt.table["s"] == (1, 2, 3)
        assert rt.stats().rounds == math.ceil(1 / eps)


def test_join_overlaps_rounds_and_sums_work():
    rt = make_runtime(0.5, 16)
    kids = []
    for r in (1, 3):
        kid = rt.fork()
        kid.load({"a": 1})
        for _ in range(r):
            kid.run_round([lambda ctx: ctx.read("a")])
        kids.append(kid)
    rt.join(kids)
    st = rt.stats()
    assert st.rounds == 3 and st.adaptive_queries == 4


def test_words():
    assert words(5) == 1
    assert words((1, (2, 3), [4])) == 4
    assert words({1, 2}) == 2
    assert words(()) == 1


def test_determinism():
    def run():
        rt = make_runtime(0.5, 16)
        rt.load({("v", i): i for i in range(8)})
        rt.map_round("double", range(8), lambda ctx, i: ctx.write(("d", i), 2 * ctx.read(("v", i))))
        return rt.table, rt.stats()

    assert run() == run()
