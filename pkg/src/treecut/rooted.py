"""Rooted spanning trees: ancestry, LCA, treefix sums.

The preorder is heavy-child-first, so every heavy path occupies a contiguous
block of preorder positions. ``tin[v]`` is both v's entry time and its slot in
the path-aggregate structure; ``v``'s subtree is ``order[tin[v]:tout[v]]``.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import _accel
from ._accel import jit
from .errors import InternalError
from .graph import WeightedGraph


@jit
def _root_kernel(n, tu, tv, root):
    deg = np.zeros(n + 1, np.int64)
    for i in range(len(tu)):
        deg[tu[i] + 1] += 1
        deg[tv[i] + 1] += 1
    for i in range(n):
        deg[i + 1] += deg[i]
    adj = np.empty(2 * len(tu), np.int64)
    fill = deg[:-1].copy()
    for i in range(len(tu)):
        adj[fill[tu[i]]] = tv[i]
        fill[tu[i]] += 1
        adj[fill[tv[i]]] = tu[i]
        fill[tv[i]] += 1

    parent = np.full(n, -1, np.int64)
    depth = np.zeros(n, np.int64)
    bfs = np.empty(n, np.int64)
    seen = np.zeros(n, np.bool_)
    bfs[0] = root
    seen[root] = True
    head_q = 0
    tail_q = 1
    while head_q < tail_q:
        x = bfs[head_q]
        head_q += 1
        for j in range(deg[x], deg[x + 1]):
            y = adj[j]
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                depth[y] = depth[x] + 1
                bfs[tail_q] = y
                tail_q += 1
    if tail_q != n:
        return parent, depth, parent, parent, parent, parent, parent, False

    size = np.ones(n, np.int64)
    heavy = np.full(n, -1, np.int64)
    for i in range(n - 1, 0, -1):
        x = bfs[i]
        size[parent[x]] += size[x]
    for i in range(n - 1, 0, -1):
        x = bfs[i]
        p = parent[x]
        h = heavy[p]
        if h == -1 or size[x] > size[h] or (size[x] == size[h] and x < h):
            heavy[p] = x

    # heavy-first preorder; light children in increasing id order
    order = np.empty(n, np.int64)
    tin = np.empty(n, np.int64)
    head = np.empty(n, np.int64)
    stack = np.empty(n, np.int64)
    top = 0
    stack[0] = root
    top = 1
    head[root] = root
    t = 0
    light = np.empty(n, np.int64)
    while top > 0:
        top -= 1
        x = stack[top]
        tin[x] = t
        order[t] = x
        t += 1
        nl = 0
        for j in range(deg[x], deg[x + 1]):
            y = adj[j]
            if y != parent[x] and y != heavy[x]:
                light[nl] = y
                nl += 1
        ls = np.sort(light[:nl])
        for j in range(nl - 1, -1, -1):
            y = ls[j]
            head[y] = y
            stack[top] = y
            top += 1
        if heavy[x] != -1:
            head[heavy[x]] = head[x]
            stack[top] = heavy[x]
            top += 1
    return parent, depth, order, tin, size, heavy, head, True


@jit
def _euler_kernel(n, root, order, tin, size, parent):
    # Euler tour of length 2n-1 derived from the preorder
    tour = np.empty(2 * n - 1, np.int64)
    first = np.empty(n, np.int64)
    k = 0
    for i in range(n):
        x = order[i]
        if i > 0:
            # climb from the previous vertex to x's parent
            y = order[i - 1]
            while y != parent[x]:
                y = parent[y]
                tour[k] = y
                k += 1
        first[x] = k
        tour[k] = x
        k += 1
    y = order[n - 1]
    while y != root:
        y = parent[y]
        tour[k] = y
        k += 1
    return tour, first


@jit
def _treefix_kernel(order, parent, f):
    out = f.copy()
    for i in range(len(order) - 1, 0, -1):
        x = order[i]
        out[parent[x]] += out[x]
    return out


def _treefix_numpy(tin, tout, order, f):
    cs = np.zeros(len(f) + 1, dtype=f.dtype)
    np.cumsum(f[order], out=cs[1:])
    return cs[tout] - cs[tin]


class RootedTree:
    """A spanning tree rooted at ``root``.

    Attributes are read-only numpy arrays indexed by vertex id: ``parent``
    (-1 at the root), ``depth``, ``tin``/``tout`` (preorder interval of the
    subtree), ``size``, ``heavy`` (heavy child or -1) and ``head`` (top of
    the vertex's heavy path). ``order[i]`` is the vertex with ``tin == i``.
    """

    def __init__(self, n: int, tu, tv, root: int = 0) -> None:
        tu = np.asarray(tu, dtype=np.int64)
        tv = np.asarray(tv, dtype=np.int64)
        if len(tu) != n - 1:
            raise ValueError(f"a spanning tree on {n} vertices has {n - 1} edges, got {len(tu)}")
        if not 0 <= root < n:
            raise ValueError("root out of range")
        res = _root_kernel(n, tu, tv, root)
        if not res[-1]:
            raise ValueError("edges do not form a spanning tree")
        self.n = n
        self.root = int(root)
        self.tree_u = tu
        self.tree_v = tv
        (self.parent, self.depth, self.order, self.tin, self.size,
         self.heavy, self.head, _) = res
        self.tout = self.tin + self.size
        for a in (self.parent, self.depth, self.order, self.tin, self.tout,
                  self.size, self.heavy, self.head):
            a.setflags(write=False)

    @classmethod
    def from_parent(cls, parent, root: int | None = None) -> "RootedTree":
        parent = np.asarray(parent, dtype=np.int64)
        roots = np.flatnonzero(parent < 0)
        if len(roots) != 1:
            raise ValueError("parent array must have exactly one root")
        r = int(roots[0])
        kids = np.flatnonzero(parent >= 0)
        return cls(len(parent), kids, parent[kids], r if root is None else root)

    # -- ancestry -------------------------------------------------------------

    def is_descendant(self, u, v):
        """``u`` in the subtree of ``v`` (inclusive). Vectorized."""
        tu = self.tin[u]
        return (self.tin[v] <= tu) & (tu < self.tout[v])

    def incomparable(self, v: int, w: int) -> bool:
        return not (bool(self.is_descendant(v, w)) or bool(self.is_descendant(w, v)))

    def subtree_mask(self, v: int) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[self.order[self.tin[v]:self.tout[v]]] = True
        return m

    def descendants(self, v: int) -> np.ndarray:
        return self.order[self.tin[v]:self.tout[v]]

    def ancestors(self, v: int) -> list[int]:
        out = [int(v)]
        while self.parent[out[-1]] >= 0:
            out.append(int(self.parent[out[-1]]))
        return out

    @cached_property
    def num_children(self) -> np.ndarray:
        c = np.bincount(self.parent[self.parent >= 0], minlength=self.n)
        c.setflags(write=False)
        return c

    @cached_property
    def leaves(self) -> np.ndarray:
        return np.flatnonzero(self.num_children == 0) if self.n > 1 else np.zeros(0, np.int64)

    # -- LCA via Euler tour + sparse table ---------------------------------------

    @cached_property
    def _sparse_table(self):
        tour, first = _euler_kernel(self.n, self.root, self.order, self.tin, self.size, self.parent)
        # ancestors have smaller preorder index, so the range-min over tin finds the LCA
        key = self.tin[tour]
        table = [key]
        span = 1
        while 2 * span <= len(key):
            prev = table[-1]
            table.append(np.minimum(prev[:-span], prev[span:]))
            span *= 2
        return tour, first, table

    def lca(self, a, b):
        """Least common ancestor, vectorized over arrays of vertex pairs."""
        _, first, table = self._sparse_table
        scalar = np.ndim(a) == 0 and np.ndim(b) == 0
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        b = np.atleast_1d(np.asarray(b, dtype=np.int64))
        fa, fb = first[a], first[b]
        lo = np.minimum(fa, fb)
        hi = np.maximum(fa, fb) + 1
        span = hi - lo
        k = np.log2(span).astype(np.int64)
        # guard against log2 rounding near powers of two
        k -= (np.left_shift(1, k) > span)
        k += (np.left_shift(1, k + 1) <= span)
        res = np.empty_like(lo)
        for level in np.unique(k):
            sel = k == level
            row = table[level]
            res[sel] = np.minimum(row[lo[sel]], row[hi[sel] - (1 << int(level))])
        out = self.order[res]
        return int(out[0]) if scalar else out

    def __repr__(self) -> str:
        return f"RootedTree(n={self.n}, root={self.root})"


def root_tree(tree, g: WeightedGraph | None = None, root: int = 0) -> RootedTree:
    """Root a spanning tree given as a ``SpanningTree`` or ``(tu, tv)`` pair."""
    if hasattr(tree, "endpoints"):
        tu, tv = tree.endpoints
    else:
        tu, tv = tree
    n = g.n if g is not None else len(tu) + 1
    return RootedTree(n, tu, tv, root)


def treefix_sum(rt: RootedTree, f) -> np.ndarray:
    """``out[v]`` = sum of ``f`` over the subtree of ``v``."""
    f = np.asarray(f)
    if f.shape != (rt.n,):
        raise ValueError("treefix input must have one value per vertex")
    if f.dtype.kind not in "fi":
        f = f.astype(np.float64)
    if _accel.USE_NUMBA:
        return _treefix_kernel(rt.order, rt.parent, f)
    return _treefix_numpy(rt.tin, rt.tout, rt.order, f)


def lca_all_edges(rt: RootedTree, g: WeightedGraph) -> np.ndarray:
    """LCA of the endpoints of every graph edge."""
    if g.m == 0:
        return np.zeros(0, dtype=np.int64)
    return np.asarray(rt.lca(g.u, g.v), dtype=np.int64).reshape(g.m)


def incomparable(rt: RootedTree, v: int, w: int) -> bool:
    return rt.incomparable(v, w)


def check_tree(rt: RootedTree) -> None:
    """Cheap structural self-check used by tests and debug paths."""
    if rt.parent[rt.root] != -1 or (rt.parent >= 0).sum() != rt.n - 1:
        raise InternalError("malformed parent array")
