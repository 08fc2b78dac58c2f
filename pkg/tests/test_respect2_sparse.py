import math

import numpy as np
import pytest
from hypothesis import given

from treecut.generators import cycle, sparse_random
from treecut.graph import cut_value
from treecut.packing import mst_edges
from treecut.respect2_dense import induced_side, two_respect_dense
from treecut.respect2_sparse import (PrecutState, SparseStats, boughs, comparable_pass,
                                     min_precut_bough, two_respect_sparse)
from treecut.rooted import RootedTree

from helpers import graph_tree_pairs, naive_ancestors, naive_cut, random_graph_and_tree


@given(graph_tree_pairs(min_n=2, max_n=40))
def test_agrees_with_dense_table(pair):
    g, rt = pair
    cut = two_respect_sparse(rt, g)
    assert cut.value == pytest.approx(two_respect_dense(rt, g).min_value)
    assert cut_value(g, cut.side) == pytest.approx(cut.value)


@given(graph_tree_pairs(min_n=2, max_n=40, weights="real"))
def test_agrees_with_dense_table_real_weights(pair):
    g, rt = pair
    assert two_respect_sparse(rt, g).value == pytest.approx(two_respect_dense(rt, g).min_value)


@given(graph_tree_pairs(min_n=2, max_n=60))
def test_boughs_partition_chain_vertices(pair):
    _, rt = pair
    bl = boughs(rt)
    seen = set()
    for b in bl:
        assert rt.num_children[b[0]] == 0  # starts at a leaf
        for lo, hi in zip(b[:-1], b[1:]):
            assert rt.parent[lo] == hi and rt.num_children[hi] == 1
        assert rt.parent[b[-1]] >= 0
        seen.update(b.tolist())
    assert len(bl) == len(rt.leaves)
    assert rt.root not in seen


@given(graph_tree_pairs(min_n=2, max_n=80))
def test_leaf_count_halves_each_round(pair):
    g, rt = pair
    stats = SparseStats()
    two_respect_sparse(rt, g, stats)
    for a, b in zip(stats.leaves, stats.leaves[1:]):
        assert b <= a // 2
    assert stats.rounds <= math.floor(math.log2(max(len(rt.leaves), 1))) + 1
    assert all(x >= 0 for x in stats.vanished)


def _precut_reference(g, rt, bough, i):
    # min over chain vertices d at or below bough[i], w incomparable with d
    # and on the root path of a neighbour of d, of C(w) - 2 * cross(d's subtree, w's subtree)
    best = math.inf
    for d in bough[:i + 1]:
        sd = rt.subtree_mask(d)
        nbrs = [b for a, b, _ in g.edges() if a == d] + [a for a, b, _ in g.edges() if b == d]
        cands = {w for u in nbrs for w in naive_ancestors(rt, u)}
        for w in cands:
            if w == rt.root or not rt.incomparable(int(d), w):
                continue
            sw = rt.subtree_mask(w)
            cw = naive_cut(g, sw)
            cross = sum(x for a, b, x in g.edges() if (sd[a] and sw[b]) or (sd[b] and sw[a]))
            best = min(best, cw - 2 * cross)
    return best


@given(graph_tree_pairs(min_n=3, max_n=14))
def test_min_precut_matches_definition_and_is_monotone(pair):
    g, rt = pair
    state = PrecutState(rt, g)
    before = state.agg.markers()
    for b in boughs(rt):
        vals, wit = min_precut_bough(state, b)
        assert np.array_equal(state.agg.markers(), before)  # restored
        assert all(x >= y for x, y in zip(vals, vals[1:]))
        for i in range(len(b)):
            assert vals[i] == pytest.approx(_precut_reference(g, rt, b, i))
            if math.isfinite(vals[i]):
                # witness plus the matching chain vertex is a real incomparable pair cut
                cands = [naive_cut(g, induced_side(rt, (int(d), int(wit[i]))))
                         - naive_cut(g, rt.subtree_mask(d))
                         for d in b[:i + 1] if rt.incomparable(int(d), int(wit[i]))]
                assert min(cands) <= vals[i] + 1e-9


@given(graph_tree_pairs(min_n=3, max_n=14))
def test_comparable_pass_matches_nested_pairs(pair):
    g, rt = pair
    table = two_respect_dense(rt, g)
    state = PrecutState(rt, g)
    for b in boughs(rt):
        val, v, w = comparable_pass(state, b)
        want = min((table.values[v2, w2] for v2 in b for w2 in naive_ancestors(rt, int(v2))[1:]
                    if w2 != rt.root), default=math.inf)
        assert val == pytest.approx(want)
        if math.isfinite(val):
            assert naive_cut(g, induced_side(rt, (v, w))) == pytest.approx(val)


def test_path_tree_single_round():
    g = cycle(8)
    rt = RootedTree(8, g.u[:-1], g.v[:-1], root=0)
    stats = SparseStats()
    assert two_respect_sparse(rt, g, stats).value == 2
    assert stats.rounds == 1


def test_cutover_round_recorded_on_request():
    rng = np.random.default_rng(2)
    g = sparse_random(3000, rng)
    tree = mst_edges(g.n, g.u, g.v, rng.random(g.m))
    rt = RootedTree(g.n, g.u[tree], g.v[tree])
    stats = SparseStats()
    two_respect_sparse(rt, g, stats, track_cutover=True)
    assert stats.cutover_round is not None
    assert stats.leaves[stats.cutover_round] <= g.m / g.n
    quiet = SparseStats()
    two_respect_sparse(rt, g, quiet)
    assert quiet.cutover_round is None


def test_medium_graph_against_dense():
    rng = np.random.default_rng(11)
    g, rt = random_graph_and_tree(300, rng, p=0.02, weights="real")
    assert two_respect_sparse(rt, g).value == pytest.approx(two_respect_dense(rt, g).min_value)


def test_requires_two_vertices():
    with pytest.raises(ValueError):
        two_respect_sparse(RootedTree(1, [], []), cycle(1))
