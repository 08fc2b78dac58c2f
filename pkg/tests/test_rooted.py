import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treecut.generators import cycle
from treecut.rooted import RootedTree, incomparable, lca_all_edges, root_tree, treefix_sum

from helpers import graph_tree_pairs, naive_ancestors, naive_lca, random_graph_and_tree


def test_path_depths():
    rt = RootedTree(3, [0, 1], [1, 2], root=0)
    assert rt.depth.tolist() == [0, 1, 2]


def test_star_depths():
    rt = RootedTree(5, [0, 0, 0, 0], [1, 2, 3, 4], root=0)
    assert rt.depth.tolist() == [0, 1, 1, 1, 1]
    assert incomparable(rt, 1, 2)
    assert not incomparable(rt, 0, 3)


def test_treefix_on_path():
    rt = RootedTree(3, [0, 1], [1, 2], root=0)
    assert treefix_sum(rt, [1, 2, 3]).tolist() == [6, 5, 3]
    assert treefix_sum(rt, np.zeros(3)).tolist() == [0, 0, 0]


def test_not_a_spanning_tree():
    with pytest.raises(ValueError):
        RootedTree(4, [0, 1, 0], [1, 0, 1])
    with pytest.raises(ValueError):
        RootedTree(4, [0, 1], [1, 2])


def test_from_parent_and_root_tree():
    rt = RootedTree.from_parent([-1, 0, 0, 1])
    assert rt.parent.tolist() == [-1, 0, 0, 1]
    again = root_tree((rt.tree_u, rt.tree_v), root=3)
    assert again.root == 3 and again.parent[3] == -1


@given(st.integers(1, 50), st.integers(0, 2 ** 32 - 1))
def test_ancestry_matches_parent_chasing(n, seed):
    rng = np.random.default_rng(seed)
    _, rt = random_graph_and_tree(n, rng, p=0, root=int(rng.integers(0, n)))
    for v in range(n):
        anc = set(naive_ancestors(rt, v))
        assert set(rt.ancestors(v)) == anc
        for u in range(n):
            assert bool(rt.is_descendant(v, u)) == (u in anc)


@given(graph_tree_pairs(max_n=30), st.integers(0, 2 ** 32 - 1))
def test_treefix_matches_definition(pair, seed):
    _, rt = pair
    f = np.random.default_rng(seed).integers(-9, 9, rt.n)
    want = [sum(f[w] for w in range(rt.n) if rt.is_descendant(w, v)) for v in range(rt.n)]
    assert treefix_sum(rt, f).tolist() == want


@given(graph_tree_pairs(max_n=20), st.integers(0, 2 ** 32 - 1))
def test_treefix_is_linear_and_totals_at_root(pair, seed):
    _, rt = pair
    rng = np.random.default_rng(seed)
    f, g = rng.integers(-5, 5, rt.n), rng.integers(-5, 5, rt.n)
    assert np.array_equal(treefix_sum(rt, f) + treefix_sum(rt, g), treefix_sum(rt, f + g))
    assert treefix_sum(rt, f)[rt.root] == f.sum()


@given(graph_tree_pairs(max_n=30))
def test_lca_matches_naive_walk(pair):
    g, rt = pair
    got = lca_all_edges(rt, g)
    assert got.tolist() == [naive_lca(rt, a, b) for a, b in zip(g.u, g.v)]
    for a in range(rt.n):
        for b in range(rt.n):
            assert rt.lca(a, b) == naive_lca(rt, a, b)


def test_lca_edge_cases():
    rt = RootedTree(5, [0, 0, 1, 1], [1, 2, 3, 4], root=0)
    assert rt.lca(3, 1) == 1  # tree edge -> parent
    assert rt.lca(1, 2) == 0  # two children of the root
    assert rt.lca(3, 4) == 1
    assert rt.lca(2, 2) == 2


@given(graph_tree_pairs(max_n=30))
def test_incomparable_matches_naive(pair):
    _, rt = pair
    for v in range(rt.n):
        av = set(naive_ancestors(rt, v))
        for w in range(rt.n):
            aw = set(naive_ancestors(rt, w))
            assert incomparable(rt, v, w) == (w not in av and v not in aw)


def test_heavy_paths_are_contiguous_in_preorder():
    rng = np.random.default_rng(3)
    _, rt = random_graph_and_tree(200, rng, p=0)
    for v in range(rt.n):
        h = rt.head[v]
        assert rt.tin[v] - rt.tin[h] == rt.depth[v] - rt.depth[h]
        assert rt.is_descendant(v, h)
    # every root path crosses few heavy paths
    worst = max(len({int(rt.head[u]) for u in naive_ancestors(rt, v)}) for v in range(rt.n))
    assert worst <= 1 + np.log2(rt.n)


def test_single_vertex_tree():
    rt = RootedTree(1, [], [], 0)
    assert rt.leaves.tolist() == []
    assert treefix_sum(rt, [4.0]).tolist() == [4.0]
    assert lca_all_edges(rt, cycle(1)).tolist() == []
