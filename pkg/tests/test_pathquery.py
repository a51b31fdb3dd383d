import random

import pytest
from corpus import random_shaped_tree
from hypothesis import given, settings
from hypothesis import strategies as st

from ampcut.graph import SpanningTree
from ampcut.oracles import naive_coverage, naive_path_scan
from ampcut.pathquery import NotAncestorError, TimeInterval, build_index, min_coverage, min_prefix_sum

PATH = SpanningTree.from_parent_keys([-1, 0, 1], [0, 1, 2])  # a-b-c, keys (a,b)=1, (b,c)=2


def test_path_examples():
    idx = build_index(PATH)
    assert idx.path_max_key(2, 0) == 2
    assert idx.path_min_key(2, 0) == 1
    assert idx.path_max_key(2, 2) == 0
    assert idx.path_max_key(1, 0) == 1


def test_not_ancestor():
    t = SpanningTree.from_parent_keys([-1, 0, 0], [0, 1, 2])
    with pytest.raises(NotAncestorError):
        build_index(t).path_max_key(1, 2)


def test_lca_and_general_path():
    t = SpanningTree.from_parent_keys([-1, 0, 0, 1], [0, 4, 2, 7])
    idx = build_index(t)
    assert idx.lca(3, 2) == 0
    assert idx.path_max(3, 2) == 7
    assert idx.path_max(1, 1) == 0


@pytest.mark.parametrize("seed", range(20))
def test_path_queries_match_walk(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 200)
    t = random_shaped_tree(n, rng)
    idx = build_index(t)
    for _ in range(200):
        u = rng.randrange(n)
        chain = [u]
        while t.parent[chain[-1]] >= 0:
            chain.append(t.parent[chain[-1]])
        a = rng.choice(chain)
        assert idx.path_max_key(u, a) == naive_path_scan(t, u, a)
        assert idx.path_min_key(u, a) == naive_path_scan(t, u, a, min)


def test_min_prefix_sum_examples():
    assert min_prefix_sum([1, -3, 2, -1]) == (-2, 2)
    assert min_prefix_sum([2, 1]) == (2, 1)
    assert min_prefix_sum([]) == (0, 0)


def test_min_coverage_examples():
    ivs = [TimeInterval(1, 3), TimeInterval(2, 5), TimeInterval(4, 6)]
    assert min_coverage(ivs, 6) == (0, 0)
    assert min_coverage([TimeInterval(0, 1), TimeInterval(0, 1)], 1) == (2, 0)
    assert min_coverage([], 0) == (0, 0)
    assert min_coverage([TimeInterval(0, 2, multiplicity=3), TimeInterval(1, 2)], 2) == (3, 0)


def test_interval_validation():
    with pytest.raises(ValueError):
        TimeInterval(3, 2)
    with pytest.raises(ValueError):
        TimeInterval(-1, 2)
    with pytest.raises(ValueError):
        min_coverage([TimeInterval(0, 5)], 4)


intervals = st.integers(0, 30).flatmap(
    lambda a: st.tuples(st.just(a), st.integers(a, 30), st.integers(1, 4))
)


@settings(max_examples=300, deadline=None)
@given(st.lists(intervals, max_size=12), st.integers(0, 10))
def test_min_coverage_matches_naive(raw, extra):
    horizon = max((b for _, b, _ in raw), default=0) + extra
    ivs = [TimeInterval(a, b, multiplicity=m) for a, b, m in raw]
    assert min_coverage(ivs, horizon) == naive_coverage(ivs, horizon)
