"""Selection proportions for Models 1a/1b/2a/2b at desk scale.

Usage: python scripts/reproduce_tables.py [--reps 50] [--p 500] [--out results/tables]
"""
import argparse
import sys
from pathlib import Path

from comecsis.harness import run_replications


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--models", default="1a,1b,2a,2b")
    ap.add_argument("--rhos", default="0,0.7")
    ap.add_argument("--n", type=int, default=150)
    ap.add_argument("--p", type=int, default=500)
    ap.add_argument("--reps", type=int, default=50)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--verbatim-2a", action="store_true",
                    help="use the printed 2a sphere map instead of standard coordinates")
    ap.add_argument("--out", type=Path, default=Path("results/tables"))
    args = ap.parse_args(argv)

    for model in args.models.split(","):
        for rho in (float(r) for r in args.rhos.split(",")):
            s = run_replications(model, args.n, args.p, rho, args.reps, args.seed,
                                 n_jobs=args.threads,
                                 verbatim_2a=args.verbatim_2a and model == "2a")
            s.write(args.out / f"model{model}_rho{rho:g}")
            sys.stdout.write(s.tsv())
            sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
