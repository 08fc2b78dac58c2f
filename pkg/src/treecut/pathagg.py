"""Ancestor-path add and ancestor-path min over a static rooted tree.

Heavy paths are contiguous in the tree's preorder, so a root path splits
into O(log n) preorder ranges. One lazy range-add/range-min segment tree over
the preorder serves all of them.

Infinity is kept exact: a marker is a pair ``(count, value)`` meaning
``count * inf + value``, compared lexicographically. Adding ``+inf`` bumps the
count, so subtracting it again on rollback restores the marker exactly.
"""
from __future__ import annotations

import math

import numpy as np

from ._accel import jit
from .rooted import RootedTree

_IDENT_C = np.int64(1) << np.int64(60)
_IDENT_P = np.int64(1) << np.int64(60)


@jit
def _less(c1, v1, p1, c2, v2, p2):
    if c1 != c2:
        return c1 < c2
    if v1 != v2:
        return v1 < v2
    return p1 < p2


@jit
def seg_build(c0, v0):
    """Arrays ``(dc, dv, dp, lc, lv)``: node count, value, argmin position, lazy pair."""
    n = len(c0)
    size = 1
    while size < n:
        size *= 2
    dc = np.full(2 * size, _IDENT_C, np.int64)
    dv = np.full(2 * size, np.inf)
    dp = np.full(2 * size, _IDENT_P, np.int64)
    lc = np.zeros(size, np.int64)
    lv = np.zeros(size)
    for i in range(n):
        dc[size + i] = c0[i]
        dv[size + i] = v0[i]
        dp[size + i] = i
    for k in range(size - 1, 0, -1):
        _pull(dc, dv, dp, k)
    return dc, dv, dp, lc, lv


@jit
def _pull(dc, dv, dp, k):
    a = 2 * k
    b = a + 1
    if _less(dc[b], dv[b], dp[b], dc[a], dv[a], dp[a]):
        a = b
    dc[k] = dc[a]
    dv[k] = dv[a]
    dp[k] = dp[a]


@jit
def _height(size):
    h = 0
    while (1 << h) < size:
        h += 1
    return h


# Push, apply and pull are spelled out inline in the two range functions:
# numba keeps reference counting on the array arguments of helper calls,
# which cost ten times the actual work here.

@jit
def seg_range_add(dc, dv, dp, lc, lv, l, r, a, b):
    size = len(lc)
    h = _height(size)
    l += size
    r += size
    for i in range(h, 0, -1):
        for k, edge in ((l >> i, l), ((r - 1) >> i, r)):
            if ((edge >> i) << i) != edge and (lc[k] != 0 or lv[k] != 0.0):
                pc = lc[k]
                pv = lv[k]
                for ch in (2 * k, 2 * k + 1):
                    dc[ch] += pc
                    dv[ch] += pv
                    if ch < size:
                        lc[ch] += pc
                        lv[ch] += pv
                lc[k] = 0
                lv[k] = 0.0
    l2 = l
    r2 = r
    while l2 < r2:
        if l2 & 1:
            dc[l2] += a
            dv[l2] += b
            if l2 < size:
                lc[l2] += a
                lv[l2] += b
            l2 += 1
        if r2 & 1:
            r2 -= 1
            dc[r2] += a
            dv[r2] += b
            if r2 < size:
                lc[r2] += a
                lv[r2] += b
        l2 >>= 1
        r2 >>= 1
    for i in range(1, h + 1):
        for k, edge in ((l >> i, l), ((r - 1) >> i, r)):
            if ((edge >> i) << i) != edge:
                x = 2 * k
                y = x + 1
                if _less(dc[y], dv[y], dp[y], dc[x], dv[x], dp[x]):
                    x = y
                # a node's own pending tag is not in its children yet
                dc[k] = dc[x] + lc[k]
                dv[k] = dv[x] + lv[k]
                dp[k] = dp[x]


@jit
def seg_range_min(dc, dv, dp, lc, lv, l, r):
    size = len(lc)
    h = _height(size)
    l += size
    r += size
    for i in range(h, 0, -1):
        for k, edge in ((l >> i, l), ((r - 1) >> i, r)):
            if ((edge >> i) << i) != edge and (lc[k] != 0 or lv[k] != 0.0):
                pc = lc[k]
                pv = lv[k]
                for ch in (2 * k, 2 * k + 1):
                    dc[ch] += pc
                    dv[ch] += pv
                    if ch < size:
                        lc[ch] += pc
                        lv[ch] += pv
                lc[k] = 0
                lv[k] = 0.0
    bc = _IDENT_C
    bv = np.inf
    bp = _IDENT_P
    while l < r:
        if l & 1:
            if _less(dc[l], dv[l], dp[l], bc, bv, bp):
                bc, bv, bp = dc[l], dv[l], dp[l]
            l += 1
        if r & 1:
            r -= 1
            if _less(dc[r], dv[r], dp[r], bc, bv, bp):
                bc, bv, bp = dc[r], dv[r], dp[r]
        l >>= 1
        r >>= 1
    return bc, bv, bp


@jit
def path_add(seg, head, parent, tin, v, a, b):
    """Add ``a * inf + b`` to every marker on the path from ``v`` to the root.

    Returns the number of segment ranges touched.
    """
    dc, dv, dp, lc, lv = seg
    touched = 0
    while v != -1:
        hd = head[v]
        seg_range_add(dc, dv, dp, lc, lv, tin[hd], tin[v] + 1, a, b)
        touched += 1
        v = parent[hd]
    return touched


@jit
def path_min(seg, head, parent, tin, v):
    """Lexicographic minimum ``(count, value, position)`` over ``v``'s root path."""
    dc, dv, dp, lc, lv = seg
    bc = _IDENT_C
    bv = np.inf
    bp = _IDENT_P
    while v != -1:
        hd = head[v]
        c, x, p = seg_range_min(dc, dv, dp, lc, lv, tin[hd], tin[v] + 1)
        if _less(c, x, p, bc, bv, bp):
            bc, bv, bp = c, x, p
        v = parent[hd]
    return bc, bv, bp


def split_inf(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Encode reals (possibly +-inf) as ``(count, finite part)`` pairs."""
    x = np.asarray(x, dtype=np.float64)
    c = np.where(np.isposinf(x), 1, np.where(np.isneginf(x), -1, 0)).astype(np.int64)
    v = np.where(np.isfinite(x), x, 0.0)
    if np.isnan(v).any():
        raise ValueError("markers must not be NaN")
    return c, v


def join_inf(c, v):
    if np.ndim(c) == 0:
        return math.inf if c > 0 else (-math.inf if c < 0 else float(v))
    c = np.asarray(c)
    return np.where(c > 0, np.inf, np.where(c < 0, -np.inf, v))


class PathAggregator:
    """Per-vertex markers with ancestor-path add/min and undo by replay.

    ``add_path(v, x)`` adds ``x`` to every vertex on the path from ``v`` up to
    the root, both ends included. ``min_path(v)`` returns the minimum marker on
    that path together with the vertex holding it; ties go to the vertex
    closest to the root.
    """

    def __init__(self, rt: RootedTree, initial) -> None:
        initial = np.asarray(initial, dtype=np.float64)
        if initial.shape != (rt.n,):
            raise ValueError("need one initial marker per vertex")
        self.rt = rt
        c, v = split_inf(initial)
        # markers live at preorder positions
        self._seg = seg_build(c[rt.order], v[rt.order])
        self._log: list[tuple[int, int, float]] = []
        self._marks: list[int] = []
        self.touched = 0

    @staticmethod
    def _encode(x: float) -> tuple[int, float]:
        if math.isnan(x):
            raise ValueError("cannot add NaN")
        if math.isinf(x):
            return (1 if x > 0 else -1), 0.0
        return 0, float(x)

    def add_path(self, v: int, x: float) -> None:
        a, b = self._encode(x)
        if a == 0 and b == 0.0:
            return
        rt = self.rt
        self.touched += path_add(self._seg, rt.head, rt.parent, rt.tin, int(v), a, b)
        if self._marks:
            self._log.append((int(v), a, b))

    def min_path(self, v: int) -> tuple[float, int]:
        rt = self.rt
        c, x, p = path_min(self._seg, rt.head, rt.parent, rt.tin, int(v))
        return join_inf(int(c), float(x)), int(rt.order[p])

    def marker(self, v: int) -> float:
        dc, dv, dp, lc, lv = self._seg
        pos = int(self.rt.tin[v])
        c, x, _ = seg_range_min(dc, dv, dp, lc, lv, pos, pos + 1)
        return join_inf(int(c), float(x))

    def markers(self) -> np.ndarray:
        return np.array([self.marker(v) for v in range(self.rt.n)])

    def checkpoint(self) -> int:
        """Start recording adds; returns the nesting depth."""
        self._marks.append(len(self._log))
        return len(self._marks)

    def rollback(self) -> None:
        """Undo every add since the latest checkpoint by adding its negation."""
        if not self._marks:
            return
        start = self._marks.pop()
        rt = self.rt
        for v, a, b in reversed(self._log[start:]):
            self.touched += path_add(self._seg, rt.head, rt.parent, rt.tin, v, -a, -b)
        del self._log[start:]

