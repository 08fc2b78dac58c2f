"""Cuts that cross exactly one tree edge."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph
from .rooted import RootedTree, lca_all_edges, treefix_sum


@dataclass(frozen=True)
class OneRespectTable:
    """``cut[v]`` is the value of the cut with side ``v``'s subtree.

    The root's entry is ``inf``: its subtree is the whole vertex set.
    """

    cut: np.ndarray
    degree_down: np.ndarray
    lca_weight: np.ndarray
    lca_down: np.ndarray
    best_value: float
    best_vertex: int


def one_respect_cuts(rt: RootedTree, g: WeightedGraph) -> OneRespectTable:
    """All 1-respecting cut values from two treefix sums.

    ``C(v's subtree) = degree_down[v] - 2 * lca_down[v]`` where
    ``degree_down`` sums weighted degrees over the subtree and ``lca_down``
    sums the weight of edges whose endpoints' LCA lies in the subtree.
    """
    if rt.n != g.n:
        raise ValueError("tree and graph have different vertex counts")
    lca = lca_all_edges(rt, g)
    rho = np.bincount(lca, weights=g.w, minlength=g.n) if g.m else np.zeros(g.n)
    delta_down = treefix_sum(rt, np.array(g.degrees))
    rho_down = treefix_sum(rt, rho)
    cut = delta_down - 2.0 * rho_down
    cut[rt.root] = np.inf
    if g.n > 1:
        best = int(np.argmin(cut))
        best_value = float(cut[best])
    else:
        best, best_value = -1, float("inf")
    for a in (cut, delta_down, rho, rho_down):
        a.setflags(write=False)
    return OneRespectTable(cut, delta_down, rho, rho_down, best_value, best)


def path_one_respect(g: WeightedGraph, path) -> np.ndarray:
    """Same values for a Hamiltonian-path tree, by the prefix recurrence.

    ``path`` lists the vertices from the root end. Returns an array indexed by
    vertex id with ``inf`` at ``path[0]``.
    """
    path = np.asarray(path, dtype=np.int64)
    n = g.n
    if sorted(path.tolist()) != list(range(n)):
        raise ValueError("path must visit every vertex exactly once")
    pos = np.empty(n, dtype=np.int64)
    pos[path] = np.arange(n)
    # weight from each vertex to its ancestors (earlier on the path) and descendants
    up = np.zeros(n)
    down = np.zeros(n)
    pu, pv = pos[g.u], pos[g.v]
    for a, b, w in zip(pu.tolist(), pv.tolist(), g.w.tolist()):
        if a > b:
            a, b = b, a
        up[b] += w
        down[a] += w
    out = np.full(n, np.inf)
    if n < 2:
        return out
    c = up[n - 1]
    out[path[n - 1]] = c
    for i in range(n - 2, 0, -1):
        c = c + up[i] - down[i]
        out[path[i]] = c
    return out
