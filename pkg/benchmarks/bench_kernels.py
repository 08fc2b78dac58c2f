"""Time the hot kernels under numba and under the numpy/interpreted fallback.

    python3 benchmarks/bench_kernels.py            # both backends, side by side
    python3 benchmarks/bench_kernels.py --single   # current backend only, JSON

The fallback is selected by TREECUT_DISABLE_NUMBA=1, so the comparison runs
this script a second time in a subprocess with that variable set.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def best_of(fn, repeat):
    fn()  # warm-up, includes compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def run_single(repeat, scale):
    from treecut import _accel
    from treecut.generators import random_connected
    from treecut.oracle import mincut_deterministic
    from treecut.packing import mst_edges, pack_trees
    from treecut.pathagg import PathAggregator
    from treecut.respect1 import one_respect_cuts
    from treecut.respect2_dense import two_respect_dense
    from treecut.respect2_sparse import two_respect_sparse
    from treecut.rooted import RootedTree, treefix_sum

    rng = np.random.default_rng(0)
    big = random_connected(20000 * scale, 80000 * scale, rng)
    tree = mst_edges(big.n, big.u, big.v, rng.random(big.m))
    rt_big = RootedTree(big.n, big.u[tree], big.v[tree])
    f = rng.random(big.n)

    mid = random_connected(400, 2000, rng, weights="int")
    tree = mst_edges(mid.n, mid.u, mid.v, rng.random(mid.m))
    rt_mid = RootedTree(mid.n, mid.u[tree], mid.v[tree])

    small = random_connected(120, 600, rng, weights="int")
    tree = mst_edges(small.n, small.u, small.v, rng.random(small.m))
    rt_small = RootedTree(small.n, small.u[tree], small.v[tree])

    def agg_ops():
        pa = PathAggregator(rt_mid, np.zeros(rt_mid.n))
        r = np.random.default_rng(1)
        for v, x in zip(r.integers(0, rt_mid.n, 2000).tolist(), r.integers(-5, 5, 2000).tolist()):
            pa.add_path(v, float(x))
            pa.min_path(v)

    cases = {
        "treefix_sum": lambda: treefix_sum(rt_big, f),
        "one_respect": lambda: one_respect_cuts(rt_big, big),
        "two_respect_dense": lambda: two_respect_dense(rt_mid, mid),
        "path_aggregator_4k_ops": agg_ops,
        "two_respect_sparse": lambda: two_respect_sparse(rt_small, small),
        "pack_trees": lambda: pack_trees(small, 1 / 6),
        "stoer_wagner": lambda: mincut_deterministic(small),
    }
    return {"backend": _accel.BACKEND,
            "seconds": {name: best_of(fn, repeat) for name, fn in cases.items()}}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--single", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=int, default=1)
    args = ap.parse_args()
    if args.single:
        print(json.dumps(run_single(args.repeat, args.scale)))
        return
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, TREECUT_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__, "--single", "--repeat", str(args.repeat),
                              "--scale", str(args.scale)],
                             env=env, check=True, capture_output=True, text=True).stdout
        res = json.loads(out.strip().splitlines()[-1])
        results[res["backend"]] = res["seconds"]
    nb, npy = results["numba"], results["numpy"]
    print(f"{'kernel':26s} {'numba s':>10s} {'fallback s':>11s} {'speedup':>8s}")
    for name in nb:
        print(f"{name:26s} {nb[name]:10.4f} {npy[name]:11.4f} {npy[name] / nb[name]:8.1f}x")


if __name__ == "__main__":
    main()
