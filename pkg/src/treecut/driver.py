"""End-to-end minimum cut: skeleton, tree packing, then per-tree analysis."""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import InternalError
from .graph import Cut, WeightedGraph, _component_labels, cut_value
from .oracle import mincut_deterministic
from .packing import TreePacking, distinct_trees, pack_trees, sample_tree
from .respect1 import one_respect_cuts
from .respect2_dense import induced_side, two_respect_dense
from .respect2_sparse import two_respect_sparse
from .rooted import RootedTree, root_tree
from .skeleton import build_skeleton

MODES = ("constant-probability", "high-probability", "refined", "fat-heuristic", "exact-oracle")
SOLVERS = ("auto", "dense", "sparse", "both")
ROOT = 0


@dataclass(frozen=True)
class RunConfig:
    mode: str = "high-probability"
    epsilon: float = 1 / 6
    trees: int | None = None
    seed: int = 0
    solver: str = "auto"
    dense_n: int = 512
    alpha: float = 1.0
    delta: float = 0.2
    threads: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}")
        if not 0 < self.epsilon <= 0.25:
            raise ValueError("epsilon must lie in (0, 1/4]")
        if self.trees is not None and self.trees < 1:
            raise ValueError("tree budget must be positive")

    def tree_budget(self, n: int) -> int:
        if self.trees is not None:
            return self.trees
        if self.mode == "constant-probability":
            return 1
        return 3 * max(1, math.ceil(math.log2(max(n, 2))))

    def pick_solver(self, n: int, m: int) -> str:
        if self.solver != "auto":
            return self.solver
        dense = n <= self.dense_n or n * n <= 8 * m * math.log2(max(n, 2)) ** 2
        return "dense" if dense else "sparse"

    def worker_count(self, jobs: int) -> int:
        cap = self.threads or int(os.environ.get("MINCUT_THREADS", "0") or 0) or os.cpu_count() or 1
        return max(1, min(cap, jobs))


@dataclass
class TreeResult:
    tree: int
    value: float
    solver: str
    edges: list[int]
    seconds: float


@dataclass
class RunReport:
    value: float
    side: np.ndarray
    mode: str
    seed: int
    trees_tried: int
    per_tree: list[TreeResult] = field(default_factory=list)
    packing_value: float | None = None
    packing_trees: int | None = None
    skeleton: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    certified: bool | None = None
    phase: int | None = None
    config: dict = field(default_factory=dict)

    @property
    def cut(self) -> Cut:
        return Cut(self.side, self.value)

    def to_dict(self, timings: bool = True) -> dict:
        d = {
            "value": self.value,
            "side": "".join("1" if b else "0" for b in self.side),
            "mode": self.mode,
            "seed": self.seed,
            "trees_tried": self.trees_tried,
            "per_tree": [asdict(t) for t in self.per_tree],
            "packing_value": self.packing_value,
            "packing_trees": self.packing_trees,
            "skeleton": self.skeleton,
            "certified": self.certified,
            "phase": self.phase,
            "config": self.config,
        }
        if timings:
            d["timings"] = self.timings
        else:
            for t in d["per_tree"]:
                t.pop("seconds")
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        d = json.loads(text)
        side = np.array([ch == "1" for ch in d.pop("side")], dtype=bool)
        per_tree = [TreeResult(**t) for t in d.pop("per_tree")]
        return cls(side=side, per_tree=per_tree, **d)


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, tag]))


def _zero_cut(g: WeightedGraph) -> np.ndarray | None:
    """Side of a weight-0 cut when the positive edges leave g disconnected."""
    keep = g.w > 0
    labels = _component_labels(g.n, g.u[keep], g.v[keep])
    if len(np.unique(labels)) == 1:
        return None
    return labels != labels[0]


def analyze_tree(g: WeightedGraph, rt: RootedTree, solver: str) -> tuple[float, np.ndarray, list[int]]:
    """Smallest cut of ``g`` crossing at most two edges of ``rt``."""
    if solver == "dense":
        table = two_respect_dense(rt, g)
        edges = list(table.best_edges())
        return table.min_value, induced_side(rt, edges), edges
    if solver == "sparse":
        c = two_respect_sparse(rt, g)
        kids = np.flatnonzero((rt.parent >= 0) & (c.side != c.side[np.maximum(rt.parent, 0)]))
        return c.value, c.side, kids.tolist()
    if solver == "both":
        dv, ds, de = analyze_tree(g, rt, "dense")
        sv, _, _ = analyze_tree(g, rt, "sparse")
        if not math.isclose(dv, sv, rel_tol=1e-9, abs_tol=1e-9):
            raise InternalError(f"dense ({dv}) and sparse ({sv}) solvers disagree")
        return dv, ds, de
    raise ValueError(f"unknown solver {solver!r}")


def _choose_trees(packing: TreePacking, budget: int, rng: np.random.Generator) -> list[int]:
    if distinct_trees(packing) <= budget:
        return list(range(len(packing.trees)))
    ids = {id(t): i for i, t in enumerate(packing.trees)}
    return [ids[id(sample_tree(packing, rng))] for _ in range(budget)]


def _run_trees(g, packing, picks, solver, cfg, one_only=False):
    def job(i):
        t0 = time.perf_counter()
        rt = root_tree(packing.trees[i], g, ROOT)
        if one_only:
            one = one_respect_cuts(rt, g)
            v = one.best_vertex
            val, side, edges = one.best_value, rt.subtree_mask(v), [v]
        else:
            val, side, edges = analyze_tree(g, rt, solver)
        return TreeResult(int(i), float(val), "one" if one_only else solver,
                          [int(e) for e in edges], time.perf_counter() - t0), side

    workers = cfg.worker_count(len(picks))
    if workers == 1:
        return [job(i) for i in picks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, picks))


def _best(results):
    best = min(range(len(results)), key=lambda k: (results[k][0].value, k))
    return results[best]


def _finish(g: WeightedGraph, side: np.ndarray, claimed: float) -> tuple[float, np.ndarray]:
    value = cut_value(g, side)
    if not math.isclose(value, claimed, rel_tol=1e-9, abs_tol=1e-9):
        raise InternalError(f"solver claimed {claimed} but the partition has value {value}")
    c = Cut(side, value)
    return value, c.side.copy()


def _skeleton_info(sk) -> dict:
    return {"p": sk.p, "rho_target": sk.rho_target, "estimated_cprime": sk.estimated_cprime,
            "edges": sk.graph.m, "attempts": sk.attempts}


def find_mincut(g: WeightedGraph, cfg: RunConfig = RunConfig()) -> RunReport:
    """Minimum cut of a connected graph.

    Always sound: the returned value is the exact value of the returned
    partition. Minimality holds with the probability the mode promises.
    """
    g.require_connected()
    if g.n < 2:
        raise ValueError("a cut needs at least two vertices")
    if cfg.mode == "refined":
        return find_mincut_refined(g, cfg)
    if cfg.mode == "fat-heuristic":
        return fat_heuristic(g, cfg)
    timings: dict[str, float] = {}
    conf = asdict(cfg)
    zero = _zero_cut(g)
    if zero is not None:
        return RunReport(0.0, Cut(zero, 0.0).side.copy(), cfg.mode, cfg.seed, 0, config=conf)
    if cfg.mode == "exact-oracle":
        t0 = time.perf_counter()
        c = mincut_deterministic(g)
        timings["oracle"] = time.perf_counter() - t0
        return RunReport(c.value, c.side.copy(), cfg.mode, cfg.seed, 0, timings=timings, config=conf)

    t0 = time.perf_counter()
    sk = build_skeleton(g, cfg.epsilon, cfg.seed)
    timings["skeleton"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    packing = sk.packing if sk.packing is not None else pack_trees(sk.graph, cfg.epsilon)
    timings["packing"] = time.perf_counter() - t0

    picks = _choose_trees(packing, cfg.tree_budget(g.n), _rng(cfg.seed, 1))
    solver = cfg.pick_solver(g.n, g.m)
    t0 = time.perf_counter()
    results = _run_trees(g, packing, picks, solver, cfg)
    timings["trees"] = time.perf_counter() - t0
    best, side = _best(results)
    value, side = _finish(g, side, best.value)
    return RunReport(value, side, cfg.mode, cfg.seed, len(picks), [r for r, _ in results],
                     packing.value, len(packing), _skeleton_info(sk), timings, config=conf)


def find_mincut_refined(g: WeightedGraph, cfg: RunConfig = RunConfig(mode="refined")) -> RunReport:
    """Many cheap 1-respect trees first, then a few 2-respect trees.

    Sampling engages only for n >= 256; below that the packing runs on g.
    ``phase`` in the report is 2 when the best cut came from the 1-respect
    phase and 3 when only the 2-respect phase found it.
    """
    g.require_connected()
    conf = asdict(cfg)
    zero = _zero_cut(g)
    if zero is not None:
        return RunReport(0.0, Cut(zero, 0.0).side.copy(), "refined", cfg.seed, 0, config=conf)
    n = g.n
    logn = math.log2(max(n, 2))
    eps = min(0.25, 1.0 / (4 * logn))
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    if n >= 256:
        sk = build_skeleton(g, eps, cfg.seed)
        h, sk_info = sk.graph, _skeleton_info(sk)
    else:
        h, sk_info = g, {"p": 1.0, "sampled": False}
    packing = pack_trees(h, eps)
    timings["packing"] = time.perf_counter() - t0
    rng = _rng(cfg.seed, 2)

    n2 = math.ceil(4 * logn ** 2)
    n3 = max(1, math.ceil(logn / max(math.log2(logn), 1.0)))
    picks2 = _choose_trees(packing, n2, rng)
    picks3 = _choose_trees(packing, n3, rng)
    t0 = time.perf_counter()
    r2 = _run_trees(g, packing, picks2, "one", cfg, one_only=True)
    timings["phase2"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    r3 = _run_trees(g, packing, picks3, cfg.pick_solver(g.n, g.m), cfg)
    timings["phase3"] = time.perf_counter() - t0
    b2, b3 = _best(r2), _best(r3)
    phase, (best, side) = (2, b2) if b2[0].value <= b3[0].value else (3, b3)
    value, side = _finish(g, side, best.value)
    return RunReport(value, side, "refined", cfg.seed, len(picks2) + len(picks3),
                     [r for r, _ in r2 + r3], packing.value, len(packing), sk_info,
                     timings, phase=phase, config=conf)


def fat_heuristic(g: WeightedGraph, cfg: RunConfig = RunConfig(mode="fat-heuristic")) -> RunReport:
    """1-respect cuts of packed trees, certified by the packing value.

    With ``eps = delta / 5``, a packing heavier than
    ``(1 + delta/2 - eps) * c'' / 2`` (``c''`` the best 1-respect cut found)
    certifies the answer. Otherwise the run falls through to the
    high-probability mode and ``certified`` is False.
    """
    g.require_connected()
    conf = asdict(cfg)
    zero = _zero_cut(g)
    if zero is not None:
        return RunReport(0.0, Cut(zero, 0.0).side.copy(), "fat-heuristic", cfg.seed, 0,
                         certified=True, config=conf)
    delta = cfg.delta
    eps = delta / 5
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    sk = build_skeleton(g, min(eps, 0.25), cfg.seed)
    packing = pack_trees(sk.graph, eps)
    timings["packing"] = time.perf_counter() - t0
    picks = _choose_trees(packing, cfg.tree_budget(g.n), _rng(cfg.seed, 3))
    t0 = time.perf_counter()
    if sk.is_source:
        res_h = res_g = _run_trees(g, packing, picks, "one", cfg, one_only=True)
    else:
        res_h = _run_trees(sk.graph, packing, picks, "one", cfg, one_only=True)
        res_g = _run_trees(g, packing, picks, "one", cfg, one_only=True)
    timings["trees"] = time.perf_counter() - t0
    c2 = _best(res_h)[0].value
    certified = packing.value > (1 + delta / 2 - eps) * c2 / 2
    if not certified:
        rep = find_mincut(g, replace(cfg, mode="high-probability"))
        rep.certified = False
        rep.mode = "fat-heuristic"
        rep.config = conf
        rep.timings = {**timings, **rep.timings}
        return rep
    best, side = _best(res_g)
    value, side = _finish(g, side, best.value)
    return RunReport(value, side, "fat-heuristic", cfg.seed, len(picks), [r for r, _ in res_g],
                     packing.value, len(packing), _skeleton_info(sk), timings,
                     certified=True, config=conf)
