"""Compiled vs pure-Python grid Dijkstra on the strip metric.

    python benchmarks/bench_dijkstra.py [--resolutions 40 80 120] [--repeat 3]
"""

import argparse
import time

import numpy as np

from solitonlab.numerics import shortest_path as sp
from solitonlab.soliton_zoo import build_phi


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--resolutions", type=int, nargs="+", default=[40, 80, 120])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--stencil", type=int, default=3)
    args = ap.parse_args()

    metric = build_phi().metric()
    box = ((-1.0, 1.0), (-0.9, 0.9))
    if sp.BACKEND != "cython":
        print("compiled kernel unavailable; only the Python backend will run")
    print(f"{'res':>5} {'nodes':>7} {'py kernel':>10} {'cy kernel':>10} {'speedup':>8} "
          f"{'py total':>9} {'cy total':>9} {'identical':>9}")
    for res in args.resolutions:
        prep = sp._prepare(metric, box, res, args.stencil)
        g11, g12, g22, nx, ny, hx, hy, st, xs, ys = prep
        src = (nx // 2) * ny + ny // 2
        kernel = lambda b: sp._kernel(b)(g11, g12, g22, nx, ny, hx, hy, st, src, -1)
        total = lambda b: sp.grid_distance_field(metric, box, res, (0.0, 0.0), args.stencil, backend=b).dist
        kp, dp = best_of(lambda: kernel("python"), args.repeat)
        tp, _ = best_of(lambda: total("python"), args.repeat)
        if sp.BACKEND == "cython":
            kc, dc = best_of(lambda: kernel("cython"), args.repeat)
            tc, _ = best_of(lambda: total("cython"), args.repeat)
            same = bool(np.array_equal(dp, dc))
            print(f"{res:5d} {nx * ny:7d} {kp:10.4f} {kc:10.4f} {kp / kc:8.1f} {tp:9.4f} {tc:9.4f} {str(same):>9}")
        else:
            print(f"{res:5d} {nx * ny:7d} {kp:10.4f} {'-':>10} {'-':>8} {tp:9.4f} {'-':>9} {'-':>9}")

if __name__ == "__main__":
    main()
