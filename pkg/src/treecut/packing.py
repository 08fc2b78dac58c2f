"""Fractional spanning-tree packing by repeated minimum spanning trees.

Multiplicative weights: each edge carries a congestion ``x = load / w`` and a
price ``exp(eta * x) / w``. Every iteration adds a small multiple of the
cheapest spanning tree. The run stops once the packing's value (after scaling
down to feasibility) is within a ``1 - eps`` factor of the best dual bound
``sum(w * price) / MST(price)`` seen so far.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._accel import jit
from .errors import DisconnectedGraphError
from .graph import WeightedGraph, component_count

CHUNK = 64
MAX_ITERS_CAP = 200_000


@jit
def _find(uf, a):
    while uf[a] != a:
        uf[a] = uf[uf[a]]
        a = uf[a]
    return a


@jit
def mst_edges(n, u, v, length):
    """Kruskal; ties broken by edge id. Returns n-1 edge ids, or fewer if disconnected."""
    order = np.argsort(length, kind="mergesort")
    uf = np.arange(n)
    out = np.empty(max(n - 1, 0), np.int64)
    k = 0
    for i in range(len(order)):
        if k == n - 1:
            break
        e = order[i]
        a = _find(uf, u[e])
        b = _find(uf, v[e])
        if a != b:
            uf[a] = b
            out[k] = e
            k += 1
    return out[:k]


@jit
def _pack_chunk(n, u, v, w, x, eta, step_frac, iters, target_ratio, state):
    # state: [total sigma, best upper bound]
    m = len(u)
    trees = np.empty((iters, max(n - 1, 0)), np.int64)
    sig = np.empty(iters)
    price = np.empty(m)
    done = False
    k = 0
    while k < iters:
        xmax = x.max()
        for e in range(m):
            price[e] = math.exp(eta * (x[e] - xmax)) / w[e]
        t = mst_edges(n, u, v, price)
        tree_price = 0.0
        bott = np.inf
        for e in t:
            tree_price += price[e]
            if w[e] < bott:
                bott = w[e]
        dual = 0.0
        for e in range(m):
            dual += w[e] * price[e]
        ub = dual / tree_price
        if ub < state[1]:
            state[1] = ub
        if xmax > 0 and state[0] / xmax >= target_ratio * state[1]:
            done = True
            break
        s = step_frac * bott
        for e in t:
            x[e] += s / w[e]
        state[0] += s
        trees[k] = t
        sig[k] = s
        k += 1
    return trees[:k], sig[:k], done


@dataclass(frozen=True)
class SpanningTree:
    """``n - 1`` edge ids of a graph, sorted."""

    edge_ids: np.ndarray
    endpoints: tuple[np.ndarray, np.ndarray]

    @classmethod
    def from_edges(cls, g: WeightedGraph, edge_ids) -> "SpanningTree":
        ids = np.sort(np.asarray(edge_ids, dtype=np.int64))
        if len(ids) != g.n - 1:
            raise ValueError("a spanning tree needs n-1 edges")
        return cls(ids, (g.u[ids], g.v[ids]))

    @property
    def key(self) -> bytes:
        return self.edge_ids.tobytes()

    def __len__(self) -> int:
        return len(self.edge_ids)


@dataclass
class TreePacking:
    """Weighted spanning trees with per-edge load at most the edge weight."""

    graph: WeightedGraph
    trees: list[SpanningTree]
    weights: np.ndarray
    load: np.ndarray
    converged: bool
    iterations: int
    upper_bound: float
    epsilon: float
    meta: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return float(self.weights.sum())

    def __len__(self) -> int:
        return len(self.trees)

    def is_feasible(self, rtol: float = 1e-9) -> bool:
        return bool(np.all(self.load <= self.graph.w * (1 + rtol)))


def _positive_part(g: WeightedGraph) -> WeightedGraph:
    keep = g.w > 0
    return WeightedGraph(g.n, g.u[keep], g.v[keep], g.w[keep])


def pack_trees(g: WeightedGraph, epsilon: float = 1 / 6, max_iters: int | None = None,
               step: float | None = None) -> TreePacking:
    """Pack spanning trees into ``g`` to within ``1 - epsilon`` of the maximum.

    Raises :class:`DisconnectedGraphError` when the positive-weight edges do
    not connect the graph (its minimum cut is then 0 and no tree fits).
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    n = g.n
    if n == 1:
        return TreePacking(g, [SpanningTree(np.zeros(0, np.int64), (g.u[:0], g.v[:0]))],
                           np.array([math.inf]), np.zeros(g.m), True, 0, math.inf, epsilon)
    pos = np.flatnonzero(g.w > 0)
    if component_count(_positive_part(g)) != 1:
        raise DisconnectedGraphError("positive-weight edges do not connect the graph")
    u, v, w = g.u[pos], g.v[pos], g.w[pos]
    m = len(pos)
    eta = max(math.log(max(m, 2)), 1.0) / epsilon
    step_frac = step if step is not None else epsilon / eta
    if max_iters is None:
        # the smallest weighted degree bounds c from above, in units of the lightest edge
        deg = np.bincount(u, weights=w, minlength=n) + np.bincount(v, weights=w, minlength=n)
        c_est = float(deg.min()) / float(w.min())
        max_iters = min(MAX_ITERS_CAP,
                        int(50 * math.ceil(c_est / epsilon ** 2) * max(math.log(n), 1.0)))
    x = np.zeros(m)
    state = np.array([0.0, math.inf])
    target = 1.0 - epsilon
    keys: dict[bytes, int] = {}
    tree_ids: list[np.ndarray] = []
    sigma: list[float] = []
    done = False
    it = 0
    while it < max_iters and not done:
        chunk = min(CHUNK, max_iters - it)
        trees, sig, done = _pack_chunk(n, u, v, w, x, eta, step_frac, chunk, target, state)
        for t, s in zip(trees, sig):
            key = np.sort(t).tobytes()
            j = keys.get(key)
            if j is None:
                keys[key] = len(tree_ids)
                tree_ids.append(np.sort(t))
                sigma.append(float(s))
            else:
                sigma[j] += float(s)
        it += len(sig)

    wts = np.array(sigma)
    load_pos = np.zeros(m)
    for t, s in zip(tree_ids, wts):
        load_pos[t] += s
    scale = float((load_pos / w).max())
    wts = wts / scale
    load = np.zeros(g.m)
    load[pos] = load_pos / scale
    trees = [SpanningTree.from_edges(g, pos[t]) for t in tree_ids]
    return TreePacking(g, trees, wts, load, bool(done), it, float(state[1]), epsilon,
                       {"eta": eta, "step": step_frac})


def sample_tree(p: TreePacking, rng: np.random.Generator) -> SpanningTree:
    """Draw a tree with probability proportional to its weight."""
    if not p.value > 0:
        raise ValueError("packing has no weight")
    i = rng.choice(len(p.trees), p=p.weights / p.weights.sum())
    return p.trees[int(i)]


def distinct_trees(p: TreePacking) -> int:
    return len(p.trees)


def trees_by_weight(p: TreePacking) -> list[SpanningTree]:
    """All packed trees, heaviest first."""
    return [p.trees[i] for i in np.argsort(-p.weights, kind="stable")]
