"""Command-line entry point.

Exit codes: 0 success, 2 invalid input or configuration, 3 failed internal
check (oracle mismatch or assertion).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path


from .errors import ValidationError
from .harness import oracle_check, run_replications
from .io import SCHEMA_VERSION, dump_json, read_matrix, write_matrix
from .metrics import MetricKind, MetricSpec, pairwise_distances
from .screening import come_csis, default_threads, iterative_come_csis, model_size
from .simulate import MODELS, generate

EXIT_OK, EXIT_VALIDATION, EXIT_INTERNAL = 0, 2, 3

METRIC_CHOICES = ["euclidean", "l2", "sphere", "circle", "shape", "precomputed"]


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _load_screen_inputs(args):
    x_header, X = read_matrix(args.x)
    _, Z = read_matrix(args.z)
    n = X.shape[0]
    if Z.shape[0] != n:
        raise ValidationError(f"{args.z}: {Z.shape[0]} rows, {args.x} has {n}")
    spec = MetricSpec.parse(args.metric, grid_length=args.grid_length)
    if spec.kind is MetricKind.PRECOMPUTED:
        if args.dist is None:
            raise ValidationError("--metric precomputed requires --dist")
        _, D = read_matrix(args.dist)
        if D.shape != (n, n):
            raise ValidationError(f"{args.dist}: expected a {n} x {n} matrix, got {D.shape}")
        D = pairwise_distances(D, spec)
    else:
        if args.y is None:
            raise ValidationError(f"--metric {args.metric} requires --y")
        _, Y = read_matrix(args.y)
        if Y.shape[0] != n:
            raise ValidationError(f"{args.y}: {Y.shape[0]} rows, {args.x} has {n}")
        if spec.kind in (MetricKind.CIRCLE,) or (spec.kind is MetricKind.EUCLIDEAN
                                                 and Y.shape[1] == 1):
            Y = Y[:, 0]
        D = pairwise_distances(Y, spec)
    if n < 10:
        _warn(f"n={n} < 10; kernel windows may contain a single point")
    return x_header, X, Z, D, spec


def _screen_config(args, spec, n, p):
    return {"x": str(args.x), "z": str(args.z), "y": None if args.y is None else str(args.y),
            "dist": None if args.dist is None else str(args.dist), "metric": spec.to_dict(),
            "h": args.h, "gamma": getattr(args, "gamma", None),
            "top": getattr(args, "top", None), "seed": args.seed, "n": n, "p": p,
            "standardize_z": not args.raw_z}


def cmd_screen(args):
    t0 = time.perf_counter()
    header, X, Z, D, spec = _load_screen_inputs(args)
    n, p = X.shape
    d_n = args.top if args.top is not None else model_size(n, args.gamma)
    config = _screen_config(args, spec, n, p)
    report = come_csis(X, D, Z, d_n, h=args.h, n_jobs=args.threads,
                       standardize=not args.raw_z, config=config)
    out = {"schema_version": SCHEMA_VERSION, **report.to_dict(), "predictors": header,
           "runtime_ms": round((time.perf_counter() - t0) * 1000.0, 3)}
    _emit(out, args.out)
    return EXIT_OK


def cmd_iterate(args):
    t0 = time.perf_counter()
    header, X, Z, D, spec = _load_screen_inputs(args)
    n, p = X.shape
    chosen = iterative_come_csis(X, D, Z, args.s, n_jobs=args.threads,
                                 standardize=not args.raw_z)
    config = _screen_config(args, spec, n, p) | {"s": args.s}
    out = {"schema_version": SCHEMA_VERSION, "config": config,
           "selected": [c + 1 for c in chosen], "predictors": header,
           "runtime_ms": round((time.perf_counter() - t0) * 1000.0, 3)}
    _emit(out, args.out)
    return EXIT_OK


def _emit(obj, out):
    if out is None or str(out) == "-":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        dump_json(out, obj)


def _response_header(ds):
    kind = ds.metric.kind
    if kind is MetricKind.L2_GRID:
        return [f"t{j + 1}" for j in range(ds.response.shape[1])]
    if kind is MetricKind.SPHERE3:
        return ["y1", "y2", "y3"]
    return ["theta"]


def cmd_simulate(args):
    extra = {"verbatim_2a": True} if args.verbatim_2a and args.model == "2a" else {}
    ds = generate(args.model, args.n, args.p, args.rho, seed=args.seed, **extra)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_matrix(out / "z.csv", ds.Z, ["z"])
    write_matrix(out / "x.csv", ds.X, [f"x{j + 1}" for j in range(ds.p)])
    write_matrix(out / "y.csv", ds.response, _response_header(ds))
    dump_json(out / "meta.json", {
        "schema_version": SCHEMA_VERSION, "model": ds.model, "seed": args.seed,
        "n": ds.n, "p": ds.p, "rho": args.rho, "active_set": [a + 1 for a in ds.active_set],
        "metric": ds.metric.to_dict(), "verbatim_2a": bool(extra),
    })
    return EXIT_OK


def cmd_replicate(args):
    def progress(rec):
        if args.verbose:
            print(f"rep {rec.rep + 1}/{args.reps}: active ranks "
                  f"{[r + 1 for r in rec.active_ranks]} ({rec.seconds:.2f}s)", file=sys.stderr)

    summary = run_replications(args.model, args.n, args.p, args.rho, args.reps, args.seed,
                               gammas=args.gammas, n_jobs=args.threads, noise=args.noise,
                               verbatim_2a=args.verbatim_2a, progress=progress)
    summary.write(args.out)
    sys.stdout.write(summary.tsv())
    return EXIT_OK


def cmd_oracle_check(args):
    report = oracle_check(args.trials, args.max_n, min_n=args.min_n, seed=args.seed,
                          weight_scale=args.weight_scale)
    for f in report.failures:
        print(json.dumps(f), file=sys.stderr)
    status = "PASS" if report.passed else "FAIL"
    print(f"{status}: {report.trials} trials, {len(report.failures)} failures, "
          f"max deviation {report.max_deviation:.3e}")
    return EXIT_OK if report.passed else EXIT_INTERNAL


def _add_screen_inputs(sp):
    sp.add_argument("--x", required=True, type=Path, help="n x p predictor CSV with header")
    sp.add_argument("--z", required=True, type=Path, help="n x d_z conditioning CSV with header")
    sp.add_argument("--y", type=Path, help="response CSV (encoding per --metric)")
    sp.add_argument("--metric", required=True, choices=METRIC_CHOICES)
    sp.add_argument("--dist", type=Path, help="n x n response distances for --metric precomputed")
    sp.add_argument("--grid-length", type=_positive_int, default=17)
    sp.add_argument("--h", type=float, help="override the bandwidth n^(-1/(6 d_z))")
    sp.add_argument("--raw-z", action="store_true", help="do not standardize Z before windowing")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=_positive_int, default=None)
    sp.add_argument("--out", type=Path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="comecsis",
                                     description="Conditional ball-correlation screening")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("screen", help="rank predictors of a dataset")
    _add_screen_inputs(sp)
    size = sp.add_mutually_exclusive_group(required=True)
    size.add_argument("--gamma", type=_positive_int, help="d_n = gamma * floor(n / ln n)")
    size.add_argument("--top", type=_positive_int, help="explicit d_n")
    sp.set_defaults(func=cmd_screen)

    sp = sub.add_parser("iterate", help="iterative screening, moving picks into Z")
    _add_screen_inputs(sp)
    sp.add_argument("--s", type=_positive_int, required=True, help="number of predictors")
    sp.set_defaults(func=cmd_iterate)

    sp = sub.add_parser("simulate", help="write one simulated dataset")
    sp.add_argument("--model", choices=MODELS, required=True)
    sp.add_argument("--n", type=_positive_int, default=150)
    sp.add_argument("--p", type=_positive_int, default=500)
    sp.add_argument("--rho", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--verbatim-2a", action="store_true")
    sp.add_argument("--out", type=Path, required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("replicate", help="selection proportions over seeded replications")
    sp.add_argument("--model", choices=MODELS, required=True)
    sp.add_argument("--n", type=_positive_int, default=150)
    sp.add_argument("--p", type=_positive_int, default=500)
    sp.add_argument("--rho", type=float, default=0.0)
    sp.add_argument("--reps", type=_positive_int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--gammas", type=lambda s: [int(g) for g in s.split(",")],
                    default=[1, 2, 3])
    sp.add_argument("--noise", type=int, default=0,
                    help="append this many categorical noise predictors")
    sp.add_argument("--verbatim-2a", action="store_true")
    sp.add_argument("--threads", type=_positive_int, default=None)
    sp.add_argument("--verbose", action="store_true")
    sp.add_argument("--out", type=Path, required=True)
    sp.set_defaults(func=cmd_replicate)

    sp = sub.add_parser("oracle-check", help="factorized vs six-index statistic")
    sp.add_argument("--trials", type=_positive_int, default=100)
    sp.add_argument("--max-n", type=int, default=7)
    sp.add_argument("--min-n", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--weight-scale", type=float, default=1.0,
                    help="multiply the weights (values other than 1 violate normalization)")
    sp.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is None and hasattr(args, "threads"):
        try:
            args.threads = default_threads()
        except ValidationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except AssertionError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
