"""Exact-recovery rate P(M_|A| = A) as the sample size grows.

Usage: python scripts/recovery_curve.py [--model 1b] [--ns 100,150,200] [--p 200]
"""
import argparse
import sys

from comecsis.harness import run_replications


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default="1b")
    ap.add_argument("--ns", default="100,150,200")
    ap.add_argument("--p", type=int, default=200)
    ap.add_argument("--rho", type=float, default=0.0)
    ap.add_argument("--reps", type=int, default=50)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    print("model\tn\tp\treps\texact_recovery")
    for n in (int(v) for v in args.ns.split(",")):
        s = run_replications(args.model, n, args.p, args.rho, args.reps, args.seed,
                             gammas=(1,), n_jobs=args.threads)
        print(f"{args.model}\t{n}\t{args.p}\t{args.reps}\t{s.exact_recovery:.4f}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
