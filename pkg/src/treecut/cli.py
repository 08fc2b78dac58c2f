"""Command-line entry point: ``treecut {mincut,enumerate,bound,bench}``.

JSON goes to stdout, diagnostics to stderr. Exit status: 0 success, 1 usage
error, 2 bad input, 3 internal consistency failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import _accel
from .driver import MODES, SOLVERS, RunConfig, _choose_trees, _rng, find_mincut
from .errors import InternalError
from .generators import sparse_random
from .graph import read_graph
from .oracle import enumerate_alpha_cuts_exhaustive, qk_bound
from .packing import mst_edges, pack_trees
from .respect2_dense import enumerate_near_min
from .respect2_sparse import SparseStats, two_respect_sparse
from .rooted import RootedTree, root_tree

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=None)
    sys.stdout.write("\n")


def cmd_mincut(args) -> int:
    g = read_graph(args.file)
    cfg = RunConfig(mode=args.mode, epsilon=args.epsilon, trees=args.trees,
                    seed=args.seed, solver=args.solver)
    rep = find_mincut(g, cfg)
    print(f"n={g.n} m={g.m} value={rep.value:g} trees={rep.trees_tried}", file=sys.stderr)
    _emit(rep.to_dict())
    return EXIT_OK


def cmd_enumerate(args) -> int:
    g = read_graph(args.file)
    g.require_connected()
    if args.exhaustive:
        cuts = enumerate_alpha_cuts_exhaustive(g, args.alpha)
        _emit({"alpha": args.alpha, "exhaustive": True,
               "best_value": cuts[0].value if cuts else None, "count": len(cuts),
               "cuts": [{"value": c.value, "side": c.bitstring()} for c in cuts]})
        return EXIT_OK
    packing = pack_trees(g, args.epsilon)
    budget = args.trees or 3 * max(1, math.ceil(math.log2(max(g.n, 2))))
    picks = _choose_trees(packing, budget, _rng(args.seed, 4))
    trees = [root_tree(packing.trees[i], g, 0) for i in picks]
    rep = enumerate_near_min(g, trees, args.alpha)
    _emit({"alpha": args.alpha, "exhaustive": False, "best_value": rep.best_value,
           "count": len(rep), "cuts": [e.to_dict() for e in rep.entries]})
    return EXIT_OK


def cmd_bound(args) -> int:
    _emit(qk_bound(args.n, args.alpha).to_dict())
    return EXIT_OK


def _fit_exponent(xs, ys) -> float | None:
    if len(xs) < 2:
        return None
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def cmd_bench(args) -> int:
    rows = []
    if args.dir:
        files = sorted(Path(args.dir).glob("*.graph")) + sorted(Path(args.dir).glob("*.txt"))
        if not files:
            print(f"no *.graph files in {args.dir}", file=sys.stderr)
        for path in files:
            g = read_graph(path)
            best, value = math.inf, None
            for r in range(args.repeat):
                t0 = time.perf_counter()
                rep = find_mincut(g, RunConfig(seed=args.seed + r, solver=args.solver))
                best = min(best, time.perf_counter() - t0)
                value = rep.value if value is None else min(value, rep.value)
            rows.append({"file": path.name, "n": g.n, "m": g.m, "value": value, "seconds": best})
            print(f"{path.name}: value={value:g} {best:.3f}s", file=sys.stderr)
    scaling = []
    for m in args.synthetic or []:
        rng = np.random.default_rng(args.seed)
        g = sparse_random(m, rng)
        tree = mst_edges(g.n, g.u, g.v, rng.random(g.m))
        rt = RootedTree(g.n, g.u[tree], g.v[tree], 0)
        best = math.inf
        for _ in range(args.repeat):
            stats = SparseStats()
            t0 = time.perf_counter()
            cut = two_respect_sparse(rt, g, stats)
            best = min(best, time.perf_counter() - t0)
        scaling.append({"m": g.m, "n": g.n, "seconds": best, "value": cut.value,
                        "rounds": stats.rounds})
        print(f"synthetic m={g.m}: {best:.3f}s over {stats.rounds} rounds", file=sys.stderr)
    out = {"backend": _accel.BACKEND, "files": rows, "scaling": scaling}
    if len(scaling) >= 2:
        out["exponent_in_m"] = _fit_exponent([s["m"] for s in scaling], [s["seconds"] for s in scaling])
        out["exponent_in_n"] = _fit_exponent([s["n"] for s in scaling], [s["seconds"] for s in scaling])
    _emit(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treecut", description="Minimum cuts by tree packing.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mc = sub.add_parser("mincut", help="find a minimum cut")
    mc.add_argument("file")
    mc.add_argument("--mode", choices=MODES, default="high-probability")
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--epsilon", type=float, default=1 / 6)
    mc.add_argument("--trees", type=int, default=None)
    mc.add_argument("--solver", choices=SOLVERS, default="auto")
    mc.set_defaults(func=cmd_mincut)

    en = sub.add_parser("enumerate", help="list near-minimum cuts")
    en.add_argument("file")
    en.add_argument("--alpha", type=float, required=True)
    en.add_argument("--exhaustive", action="store_true")
    en.add_argument("--seed", type=int, default=0)
    en.add_argument("--epsilon", type=float, default=1 / 6)
    en.add_argument("--trees", type=int, default=None)
    en.set_defaults(func=cmd_enumerate)

    bd = sub.add_parser("bound", help="cut-counting bound q_k")
    bd.add_argument("--n", type=int, required=True)
    bd.add_argument("--alpha", type=float, required=True)
    bd.set_defaults(func=cmd_bound)

    be = sub.add_parser("bench", help="time the solver on graph files or synthetic inputs")
    be.add_argument("dir", nargs="?")
    be.add_argument("--repeat", type=int, default=1)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--solver", choices=SOLVERS, default="auto")
    be.add_argument("--synthetic", type=int, nargs="*", metavar="M",
                    help="edge counts for the sparse-solver scaling run")
    be.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and not args.dir and not args.synthetic:
        parser.error("bench needs a directory or --synthetic")
    try:
        return args.func(args)
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
