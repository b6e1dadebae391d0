"""Time the pure-Python and compiled kernels on the same inputs.

Run from the repository root::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]
"""

import argparse
import random
import sys
import time
from itertools import combinations

import numpy as np

from holefree import kernels
from holefree.geom import orientation


def gp_points(rng, n, R=10**6):
    pts = []
    while len(pts) < n:
        p = (rng.randint(-R, R), rng.randint(-R, R))
        if p not in pts and all(orientation([a, b, p]) != 0 for a, b in combinations(pts, 2)):
            pts.append(p)
    return pts


def cases(rng):
    pts20 = gp_points(rng, 20)
    pts30 = gp_points(rng, 30)
    pts16 = gp_points(rng, 16)
    codes = np.random.default_rng(rng.randint(0, 2**32)).integers(0, 1 << 16, size=(1 << 16, 2),
                                                                   dtype=np.uint64)
    return [
        ("empty_polygon_dp n=30", lambda k: k.empty_polygon_dp(pts30)),
        ("brute_max_hole_2d n=20", lambda k: k.brute_max_hole_2d(pts20, 20, 10**8)),
        ("holefree_scan_2d n=16 ell=10", lambda k: k.holefree_scan_2d(pts16, 10, 10**9)),
        ("count_holes_2d n=20 ell=5", lambda k: k.count_holes_2d(pts20, 5)),
        ("box_violation 2^16 points", lambda k: k.box_violation(codes, 16, [8, 8], 0, 1 << 16)),
    ]


def best_time(fn, repeat):
    out = None
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = kernels.backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the Python timings are shown", file=sys.stderr)
    names = sorted(backends, reverse=True)  # python first
    print(f"{'kernel':32}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, run in cases(random.Random(args.seed)):
        times, results = [], []
        for name in names:
            t, res = best_time(lambda: run(backends[name]), args.repeat)
            times.append(t)
            results.append(res)
        if len(set(map(repr, results))) != 1:
            raise SystemExit(f"backends disagree on {label}")
        speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
        print(f"{label:32}" + "".join(f"{t * 1000:10.1f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
