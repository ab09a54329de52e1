"""Screening with appended categorical noise predictors against a random ranking.

Usage: python scripts/noise_robustness.py [--q 200] [--reps 20] [--top 29]
"""
import argparse
import sys

from comecsis.harness import noise_robustness


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default="1b")
    ap.add_argument("--n", type=int, default=150)
    ap.add_argument("--p", type=int, default=500)
    ap.add_argument("--q", type=int, default=200)
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--top", type=int, default=29)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    out = noise_robustness(args.n, args.p, args.q, args.reps, args.seed, args.top,
                           model=args.model, n_jobs=args.threads)
    print("rep\tcome\trandom")
    for r, (c, z) in enumerate(zip(out["come"], out["random"]), 1):
        print(f"{r}\t{c:.4f}\t{z:.4f}")
    print(f"mean\t{out['mean_come']:.4f}\t{out['mean_random']:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
