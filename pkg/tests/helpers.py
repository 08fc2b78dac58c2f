"""Shared generators and naive reference implementations for the tests."""
import itertools

import numpy as np
from hypothesis import strategies as st

from treecut.graph import WeightedGraph
from treecut.rooted import RootedTree


def random_tree_edges(n, rng):
    perm = rng.permutation(n)
    par = np.array([rng.integers(0, i) for i in range(1, n)], dtype=np.int64)
    return perm[1:], perm[par]


def random_graph_and_tree(n, rng, p=0.3, weights="int", root=0):
    """Graph containing a random spanning tree, plus that tree rooted at ``root``."""
    tu, tv = random_tree_edges(n, rng)
    extra = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    eu = np.r_[tu, [a for a, _ in extra]].astype(np.int64)
    ev = np.r_[tv, [b for _, b in extra]].astype(np.int64)
    if weights == "int":
        w = rng.integers(1, 6, len(eu)).astype(float)
    elif weights == "unit":
        w = np.ones(len(eu))
    else:
        w = np.round(rng.uniform(0.1, 5.0, len(eu)), 3)
    return WeightedGraph(n, eu, ev, w), RootedTree(n, tu, tv, root)


def naive_cut(g, side):
    side = np.asarray(side, dtype=bool)
    return sum(w for a, b, w in g.edges() if side[a] != side[b])


def naive_ancestors(rt, v):
    out = [v]
    while rt.parent[out[-1]] >= 0:
        out.append(int(rt.parent[out[-1]]))
    return out


def naive_lca(rt, a, b):
    a, b = int(a), int(b)
    while rt.depth[a] > rt.depth[b]:
        a = int(rt.parent[a])
    while rt.depth[b] > rt.depth[a]:
        b = int(rt.parent[b])
    while a != b:
        a, b = int(rt.parent[a]), int(rt.parent[b])
    return a


def all_sides(n):
    """Every bipartition with vertex 0 on side A, as boolean vectors."""
    for bits in itertools.product([False, True], repeat=n - 1):
        if any(bits):
            yield np.array((False,) + bits)


@st.composite
def graphs(draw, min_n=2, max_n=10, weights="int"):
    """Connected graphs: a random tree plus random extra edges."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    p = draw(st.floats(0.0, 0.8))
    g, _ = random_graph_and_tree(n, rng, p=p, weights=weights)
    return g


@st.composite
def graph_tree_pairs(draw, min_n=2, max_n=12, weights="int"):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    p = draw(st.floats(0.0, 0.8))
    root = draw(st.integers(0, n - 1))
    return random_graph_and_tree(n, rng, p=p, weights=weights, root=root)
