"""Weighted undirected graphs, cuts, and contraction."""
from __future__ import annotations

import io
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from ._accel import jit
from .errors import DisconnectedGraphError, GraphFormatError, InvalidCutError


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class WeightedGraph:
    """Undirected multigraph on vertices ``0..n-1`` with non-negative weights.

    Edges are stored as three parallel arrays ``u``, ``v``, ``w``. Self-loops
    are dropped on construction; parallel edges are kept until
    :func:`merge_parallel` or :func:`contract` folds them. Instances are
    immutable, so a graph may be shared between threads.
    """

    def __init__(self, n: int, u, v, w) -> None:
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        w = np.asarray(w, dtype=np.float64).ravel()
        if not (len(u) == len(v) == len(w)):
            raise ValueError("edge arrays differ in length")
        n = int(n)
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        if len(u) and (u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n):
            raise ValueError("vertex id out of range [0, n)")
        if len(w) and (not np.all(np.isfinite(w)) or w.min() < 0):
            raise ValueError("edge weights must be finite and non-negative")
        keep = u != v
        if not keep.all():
            u, v, w = u[keep], v[keep], w[keep]
        self.n = n
        self.u = _frozen(u.copy())
        self.v = _frozen(v.copy())
        self.w = _frozen(w.copy())

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple]) -> "WeightedGraph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; missing weights are 1."""
        us, vs, ws = [], [], []
        for e in edges:
            us.append(e[0])
            vs.append(e[1])
            ws.append(e[2] if len(e) > 2 else 1.0)
        return cls(n, us, vs, ws)

    @property
    def m(self) -> int:
        return len(self.u)

    @cached_property
    def total_weight(self) -> float:
        return float(self.w.sum())

    @cached_property
    def integral(self) -> bool:
        """True when every weight is an integer."""
        return bool(np.all(self.w == np.round(self.w)))

    @cached_property
    def adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR incidence: ``(indptr, neighbor, edge_id)``; each edge appears twice."""
        ends = np.concatenate([self.u, self.v])
        other = np.concatenate([self.v, self.u])
        eid = np.concatenate([np.arange(self.m), np.arange(self.m)])
        order = np.argsort(ends, kind="stable")
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(ends, minlength=self.n), out=indptr[1:])
        return (_frozen(indptr), _frozen(other[order].astype(np.int64)),
                _frozen(eid[order].astype(np.int64)))

    @cached_property
    def degrees(self) -> np.ndarray:
        """Weighted degree of every vertex."""
        d = np.bincount(self.u, weights=self.w, minlength=self.n)
        d += np.bincount(self.v, weights=self.w, minlength=self.n)
        return _frozen(d)

    def is_connected(self) -> bool:
        return component_count(self) == 1

    def require_connected(self) -> None:
        if not self.is_connected():
            raise DisconnectedGraphError("graph is not connected")

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


@jit
def _component_labels(n, u, v):
    parent = np.arange(n)
    for i in range(len(u)):
        a = u[i]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = v[i]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            parent[a] = b
    for i in range(n):
        a = i
        while parent[a] != a:
            a = parent[a]
        parent[i] = a
    return parent


def component_count(g: WeightedGraph) -> int:
    # zero-weight edges still connect for this purpose; solvers accept them
    return len(np.unique(_component_labels(g.n, g.u, g.v)))


def weighted_degree(g: WeightedGraph, v: int) -> float:
    return float(g.degrees[v])


def _as_side(n: int, side) -> np.ndarray:
    s = np.asarray(side)
    if s.dtype == bool:
        if s.shape != (n,):
            raise InvalidCutError(f"membership vector must have length {n}")
        return s
    if s.ndim == 1 and len(s) == n and np.isin(s, (0, 1)).all():
        return s.astype(bool)
    # treat as a vertex list
    out = np.zeros(n, dtype=bool)
    out[np.asarray(side, dtype=np.int64)] = True
    return out


def cut_value(g: WeightedGraph, side) -> float:
    """Total weight of edges with endpoints on opposite sides.

    ``side`` is a boolean membership vector of length ``n`` (or a 0/1 vector,
    or a list of vertex ids on one side).
    """
    s = _as_side(g.n, side)
    k = int(s.sum())
    if k == 0 or k == g.n:
        raise InvalidCutError("both sides of a cut must be non-empty")
    return float(g.w[s[g.u] != s[g.v]].sum())


@dataclass(frozen=True, eq=False)
class Cut:
    """A bipartition and its value, canonicalized so vertex 0 is on side A.

    ``side[i]`` is True when vertex ``i`` lies on side B.
    """

    side: np.ndarray
    value: float

    def __post_init__(self) -> None:
        s = np.asarray(self.side, dtype=bool)
        if s[0]:
            s = ~s
        if not s.any():
            raise InvalidCutError("both sides of a cut must be non-empty")
        object.__setattr__(self, "side", _frozen(s.copy()))
        object.__setattr__(self, "value", float(self.value))

    @classmethod
    def of(cls, g: WeightedGraph, side) -> "Cut":
        s = _as_side(g.n, side)
        return cls(s, cut_value(g, s))

    @property
    def signature(self) -> bytes:
        return signature(self.side)

    def bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.side)

    def vertices(self) -> tuple[list[int], list[int]]:
        idx = np.arange(len(self.side))
        return idx[~self.side].tolist(), idx[self.side].tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cut):
            return NotImplemented
        return self.signature == other.signature and self.value == other.value

    def __hash__(self) -> int:
        return hash(self.signature)

    def __repr__(self) -> str:
        return f"Cut(value={self.value:g}, side={self.bitstring()})"


def signature(side: np.ndarray) -> bytes:
    """Hashable key of a bipartition, identical for a side and its complement."""
    s = np.asarray(side, dtype=bool)
    if s[0]:
        s = ~s
    return np.packbits(s).tobytes() + len(s).to_bytes(4, "little")


class ContractionMap:
    """Surjection from original vertex ids onto ``0..k-1``."""

    def __init__(self, labels) -> None:
        labels = np.asarray(labels, dtype=np.int64)
        uniq = np.unique(labels)
        if len(labels) and (uniq[0] != 0 or uniq[-1] != len(uniq) - 1):
            raise ValueError("contraction labels must cover 0..k-1 exactly")
        self.labels = _frozen(labels.copy())
        self.k = len(uniq)

    @classmethod
    def identity(cls, n: int) -> "ContractionMap":
        return cls(np.arange(n))

    @classmethod
    def from_groups(cls, n: int, groups: Iterable[Iterable[int]]) -> "ContractionMap":
        """Vertices listed together share a label; unlisted vertices stay alone."""
        labels = np.full(n, -1, dtype=np.int64)
        k = 0
        for grp in groups:
            grp = list(grp)
            if not grp:
                continue
            if (labels[grp] >= 0).any():
                raise ValueError("groups overlap")
            labels[grp] = k
            k += 1
        rest = labels < 0
        labels[rest] = np.arange(k, k + int(rest.sum()))
        return cls(labels)

    def groups(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.searchsorted(self.labels[order], np.arange(self.k + 1))
        return [order[bounds[i]:bounds[i + 1]] for i in range(self.k)]

    def then(self, other: "ContractionMap") -> "ContractionMap":
        """This map followed by ``other`` (which acts on this map's image)."""
        if other.labels.shape != (self.k,):
            raise ValueError("maps do not compose")
        return ContractionMap(other.labels[self.labels])

    def lift(self, side) -> np.ndarray:
        """Pull a membership vector on contracted ids back to original ids."""
        return np.asarray(side, dtype=bool)[self.labels]


def merge_parallel(g: WeightedGraph) -> WeightedGraph:
    """Sum the weights of parallel edges; result has edges sorted by (min, max)."""
    if g.m == 0:
        return g
    a = np.minimum(g.u, g.v)
    b = np.maximum(g.u, g.v)
    key = a * g.n + b
    uniq, inv = np.unique(key, return_inverse=True)
    w = np.bincount(inv, weights=g.w, minlength=len(uniq))
    return WeightedGraph(g.n, uniq // g.n, uniq % g.n, w)


def contract(g: WeightedGraph, groups: ContractionMap, merge_parallel_edges: bool = True) -> WeightedGraph:
    """Quotient graph; edges inside a group vanish."""
    if groups.labels.shape != (g.n,):
        raise ValueError("contraction map does not cover the graph's vertices")
    lab = groups.labels
    h = WeightedGraph(groups.k, lab[g.u], lab[g.v], g.w)
    return merge_parallel(h) if merge_parallel_edges else h


# -- file format -------------------------------------------------------------

def parse_graph(text: str) -> WeightedGraph:
    """Parse ``p <n> <m>`` followed by ``e <u> <v> <w>`` lines (0-based ids)."""
    n = m = None
    us, vs, ws = [], [], []
    for lineno, raw in enumerate(io.StringIO(text), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "p":
                if n is not None or len(parts) != 3:
                    raise GraphFormatError(f"line {lineno}: bad or repeated problem line")
                n, m = int(parts[1]), int(parts[2])
            elif parts[0] == "e":
                if n is None:
                    raise GraphFormatError(f"line {lineno}: edge before problem line")
                if len(parts) != 4:
                    raise GraphFormatError(f"line {lineno}: expected 'e <u> <v> <w>'")
                us.append(int(parts[1]))
                vs.append(int(parts[2]))
                ws.append(float(parts[3]))
            else:
                raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"line {lineno}: {exc}") from None
    if n is None:
        raise GraphFormatError("missing problem line 'p <n> <m>'")
    if len(us) != m:
        raise GraphFormatError(f"problem line declares {m} edges, found {len(us)}")
    try:
        return WeightedGraph(n, us, vs, ws)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def read_graph(path: str | os.PathLike) -> WeightedGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def format_graph(g: WeightedGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"p {g.n} {g.m}")
    for a, b, w in g.edges():
        lines.append(f"e {a} {b} {int(w) if w == int(w) else repr(w)}")
    return "\n".join(lines) + "\n"


def write_graph(g: WeightedGraph, path: str | os.PathLike, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g, comment))
