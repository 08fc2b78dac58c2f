import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treecut.pathagg import PathAggregator, join_inf, split_inf
from treecut.rooted import RootedTree

from helpers import naive_ancestors, random_graph_and_tree


class ListMarkers:
    """Reference: markers as (inf count, finite part), updated vertex by vertex."""

    def __init__(self, rt, initial):
        self.rt = rt
        self.cnt = [1 if x == math.inf else (-1 if x == -math.inf else 0) for x in initial]
        self.val = [0.0 if math.isinf(x) else float(x) for x in initial]

    def add_path(self, v, x):
        for u in naive_ancestors(self.rt, v):
            if math.isinf(x):
                self.cnt[u] += 1 if x > 0 else -1
            else:
                self.val[u] += x

    def min_path(self, v):
        path = naive_ancestors(self.rt, v)
        best = min(path, key=lambda u: (self.cnt[u], self.val[u], self.rt.depth[u]))
        return join_inf(self.cnt[best], self.val[best]), best

    def markers(self):
        return [join_inf(c, x) for c, x in zip(self.cnt, self.val)]


ops = st.lists(st.tuples(st.sampled_from(["add", "min", "inf", "ninf"]),
                         st.integers(0, 10 ** 6), st.integers(-20, 20)),
               min_size=1, max_size=120)


@given(st.integers(1, 40), st.integers(0, 2 ** 32 - 1), ops)
def test_matches_reference_under_random_operations(n, seed, seq):
    rng = np.random.default_rng(seed)
    _, rt = random_graph_and_tree(n, rng, p=0)
    init = rng.integers(-10, 10, n).astype(float)
    init[rng.random(n) < 0.2] = math.inf
    pa, ref = PathAggregator(rt, init), ListMarkers(rt, init)
    for op, v, x in seq:
        v %= n
        if op == "add":
            pa.add_path(v, float(x))
            ref.add_path(v, float(x))
        elif op == "inf":
            pa.add_path(v, math.inf)
            ref.add_path(v, math.inf)
        elif op == "ninf":
            pa.add_path(v, -math.inf)
            ref.add_path(v, -math.inf)
        else:
            assert pa.min_path(v) == ref.min_path(v)
    assert pa.markers().tolist() == ref.markers()


@given(st.integers(1, 30), st.integers(0, 2 ** 32 - 1), ops, ops)
def test_rollback_restores_markers_exactly(n, seed, before, after):
    rng = np.random.default_rng(seed)
    _, rt = random_graph_and_tree(n, rng, p=0)
    pa = PathAggregator(rt, rng.normal(size=n))
    for _, v, x in before:
        pa.add_path(v % n, x / 7)
    snap = pa.markers()
    pa.checkpoint()
    for op, v, x in after:
        pa.add_path(v % n, math.inf if op == "inf" else x / 3)
    pa.rollback()
    # every add is undone by its negation, so values return up to rounding
    assert np.allclose(pa.markers(), snap, rtol=0, atol=1e-9)


def test_inf_then_minus_inf_is_exactly_neutral():
    rt = RootedTree(3, [0, 1], [1, 2])
    pa = PathAggregator(rt, [1.5, 2.5, 3.5])
    pa.add_path(2, math.inf)
    assert pa.markers().tolist() == [math.inf] * 3
    pa.add_path(1, -math.inf)
    assert pa.markers().tolist() == [1.5, 2.5, math.inf]
    pa.add_path(1, math.inf)
    assert pa.markers().tolist() == [math.inf] * 3
    pa.add_path(2, -math.inf)
    assert pa.markers().tolist() == [1.5, 2.5, 3.5]


def test_ties_prefer_vertex_nearest_root():
    rt = RootedTree(4, [0, 1, 2], [1, 2, 3])
    pa = PathAggregator(rt, [5.0, 1.0, 1.0, 1.0])
    assert pa.min_path(3) == (1.0, 1)


def test_nested_checkpoints():
    rt = RootedTree(3, [0, 0], [1, 2])
    pa = PathAggregator(rt, [0.0, 0.0, 0.0])
    pa.checkpoint()
    pa.add_path(1, 2.0)
    pa.checkpoint()
    pa.add_path(2, 3.0)
    pa.rollback()
    assert pa.markers().tolist() == [2.0, 2.0, 0.0]
    pa.rollback()
    assert pa.markers().tolist() == [0.0, 0.0, 0.0]
    pa.rollback()  # no open checkpoint: no-op


def test_bad_inputs():
    rt = RootedTree(2, [0], [1])
    with pytest.raises(ValueError):
        PathAggregator(rt, [0.0])
    with pytest.raises(ValueError):
        PathAggregator(rt, [0.0, 0.0]).add_path(1, math.nan)


def test_split_join_round_trip():
    x = np.array([1.0, -math.inf, math.inf, 0.0])
    c, v = split_inf(x)
    assert [join_inf(a, b) for a, b in zip(c, v)] == x.tolist()


def test_touched_grows_logarithmically():
    rng = np.random.default_rng(0)
    for n in (256, 4096):
        _, rt = random_graph_and_tree(n, rng, p=0)
        pa = PathAggregator(rt, np.zeros(n))
        for v in rng.integers(0, n, 200).tolist():
            pa.add_path(v, 1.0)
        # heavy-path ranges per update stay within log2(n) + 1
        assert pa.touched <= 200 * (math.log2(n) + 1)
