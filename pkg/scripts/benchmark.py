"""Wall-clock cost of one statistic and of a full screen at several thread counts.

Usage: python scripts/benchmark.py [--n 150] [--p 500] [--threads 1,2,4,8]
"""
import argparse
import os
import statistics
import sys
import time

from comecsis.core import tau_hat
from comecsis.metrics import pairwise_distances, predictor_distances
from comecsis.screening import compute_utilities
from comecsis.simulate import gen_functional


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=150)
    ap.add_argument("--p", type=int, default=500)
    ap.add_argument("--threads", default="1,2,4,8")
    ap.add_argument("--repeat", type=int, default=15)
    args = ap.parse_args(argv)

    ds = gen_functional("1b", n=args.n, p=args.p, seed=2024)
    DY = pairwise_distances(ds.response, ds.metric)
    DX = predictor_distances(ds.X[:, 0])
    tau_hat(DX, DY, ds.Z)
    times = []
    for _ in range(args.repeat):
        t0 = time.perf_counter()
        tau_hat(DX, DY, ds.Z)
        times.append(time.perf_counter() - t0)
    print(f"cores available: {os.cpu_count()}")
    print(f"single statistic, n={args.n}: median {1000 * statistics.median(times):.2f} ms")

    print("threads\tseconds\tspeedup\tefficiency")
    base = None
    for k in (int(v) for v in args.threads.split(",")):
        t0 = time.perf_counter()
        compute_utilities(ds.X, DY, ds.Z, n_jobs=k)
        sec = time.perf_counter() - t0
        base = base or sec
        print(f"{k}\t{sec:.3f}\t{base / sec:.2f}\t{base / (k * sec):.2f}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
