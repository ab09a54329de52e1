"""Replication experiments and the factorization self-check."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import w_statistic, w_statistic_bruteforce
from .errors import ValidationError
from .io import SCHEMA_VERSION, dump_json
from .metrics import pairwise_distances, MetricSpec, MetricKind
from .screening import compute_utilities, default_threads, model_size, rank_utilities
from .simulate import MODELS, gen_noise_categorical, generate, replication_seed

DEFAULT_GAMMAS = (1, 2, 3)


@dataclass
class ReplicationRecord:
    rep: int
    seed: list
    active_ranks: list[int]     # 0-based position of each active predictor in the ranking
    exact_recovery: bool        # top-|A| equals A
    seconds: float = 0.0


@dataclass
class ReplicationSummary:
    model: str
    n: int
    p: int
    rho: float
    reps: int
    seed: int
    active_set: tuple[int, ...]
    gammas: tuple[int, ...]
    d_values: dict[int, int]
    P: dict[int, list[float]]        # gamma -> proportion per active predictor
    P_a: dict[int, float]            # gamma -> all actives selected together
    exact_recovery: float
    noise: int = 0
    verbatim_2a: bool = False
    records: list[ReplicationRecord] = field(default_factory=list)

    def config(self) -> dict:
        return {"model": self.model, "n": self.n, "p": self.p, "rho": self.rho,
                "reps": self.reps, "seed": self.seed, "gammas": list(self.gammas),
                "noise": self.noise, "verbatim_2a": self.verbatim_2a}

    def tsv(self) -> str:
        labels = [f"P{a + 1}" for a in self.active_set]
        lines = ["\t".join(["model", "rho", "n", "p", "reps", "gamma", "d_n", *labels, "Pa"])]
        for g in self.gammas:
            cells = [self.model, f"{self.rho:g}", str(self.n), str(self.p), str(self.reps),
                     str(g), str(self.d_values[g]),
                     *(f"{v:.4f}" for v in self.P[g]), f"{self.P_a[g]:.4f}"]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config(),
            "active_set": [a + 1 for a in self.active_set],
            "rows": [{"gamma": g, "d_n": self.d_values[g],
                      "P": {str(a + 1): v for a, v in zip(self.active_set, self.P[g])},
                      "Pa": self.P_a[g]} for g in self.gammas],
            "exact_recovery": self.exact_recovery,
            "replications": [{"rep": r.rep, "seed": r.seed,
                              "active_ranks": [k + 1 for k in r.active_ranks],
                              "exact_recovery": r.exact_recovery} for r in self.records],
        }

    def write(self, out_dir) -> None:
        """summary.tsv and summary.json are deterministic; timings.tsv is not."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.tsv").write_text(self.tsv())
        dump_json(out / "summary.json", self.to_dict())
        rows = ["rep\tseconds"] + [f"{r.rep + 1}\t{r.seconds:.3f}" for r in self.records]
        (out / "timings.tsv").write_text("\n".join(rows) + "\n")


def screen_dataset(ds, noise: int = 0, noise_seed=None, h=None, executor=None,
                   n_jobs: int = 1) -> np.ndarray:
    """Ranking (0-based) of all predictors of a simulated dataset."""
    X = ds.X
    if noise:
        X = np.hstack([X, gen_noise_categorical(ds.n, noise, noise_seed)])
    DY = pairwise_distances(ds.response, ds.metric)
    utilities, _ = compute_utilities(X, DY, ds.Z, h=h, executor=executor, n_jobs=n_jobs)
    return rank_utilities(utilities)


def run_replications(model: str, n: int = 150, p: int = 500, rho: float = 0.0,
                     reps: int = 50, seed: int = 0, gammas=DEFAULT_GAMMAS,
                     n_jobs: int | None = None, noise: int = 0,
                     verbatim_2a: bool = False, progress=None) -> ReplicationSummary:
    """Generate, screen and score ``reps`` seeded replications."""
    if model not in MODELS:
        raise ValidationError(f"unknown model {model!r}; expected one of {MODELS}")
    if reps < 1:
        raise ValidationError(f"reps must be >= 1, got {reps}")
    gammas = tuple(int(g) for g in gammas)
    d_values = {g: model_size(n, g) for g in gammas}
    n_jobs = default_threads() if n_jobs is None else n_jobs
    extra = {"verbatim_2a": verbatim_2a} if model == "2a" else {}

    records = []
    pool = ThreadPoolExecutor(max_workers=n_jobs) if n_jobs > 1 else None
    try:
        for r in range(reps):
            t0 = time.perf_counter()
            rs = replication_seed(seed, r)
            ds = generate(model, n, p, rho, seed=rs, **extra)
            ranking = screen_dataset(ds, noise, noise_seed=rs + [1], executor=pool)
            position = np.empty_like(ranking)
            position[ranking] = np.arange(ranking.size)
            active = list(ds.active_set)
            ranks = [int(position[a]) for a in active]
            exact = set(ranking[: len(active)].tolist()) == set(active)
            records.append(ReplicationRecord(r, rs, ranks, exact, time.perf_counter() - t0))
            if progress is not None:
                progress(records[-1])
    finally:
        if pool is not None:
            pool.shutdown()

    ranks = np.array([rec.active_ranks for rec in records])
    P, P_a = {}, {}
    for g in gammas:
        inside = ranks < d_values[g]
        P[g] = [float(v) for v in inside.mean(axis=0)]
        P_a[g] = float(inside.all(axis=1).mean())
    exact = float(np.mean([rec.exact_recovery for rec in records]))
    return ReplicationSummary(model, n, p, rho, reps, seed, tuple(ds.active_set), gammas,
                              d_values, P, P_a, exact, noise, verbatim_2a, records)


def noise_robustness(n: int = 150, p: int = 500, q: int = 200, reps: int = 20,
                     seed: int = 0, top: int = 29, model: str = "1b", rho: float = 0.0,
                     n_jobs: int | None = None) -> dict:
    """Fraction of true actives in the top ``top`` after appending q
    categorical noise predictors, against a random ranking of the same size."""
    summary = run_replications(model, n, p, rho, reps, seed, gammas=(1,), n_jobs=n_jobs,
                               noise=q)
    k = len(summary.active_set)
    come = [sum(r < top for r in rec.active_ranks) / k for rec in summary.records]
    rand = []
    for rec in summary.records:
        perm = np.random.default_rng(rec.seed + [2]).permutation(p + q)
        rand.append(sum(int(a) in set(perm[:top].tolist()) for a in summary.active_set) / k)
    return {"come": come, "random": rand, "mean_come": float(np.mean(come)),
            "mean_random": float(np.mean(rand)), "top": top}


# --- factorization self-check ------------------------------------------------

def random_oracle_instance(rng: np.random.Generator, n: int):
    """Random (DX, DY, w) with exact distance ties injected.

    Objects are drawn from a random metric; a few objects are copies of
    others, and small-integer scalars are common, so equal distances occur
    often. Weights are random, uniform, or sparse, always normalized.
    """
    def objects(kind):
        if kind == "int":
            return rng.integers(0, 3, n).astype(float), MetricSpec(MetricKind.EUCLIDEAN)
        if kind == "vec":
            return rng.normal(size=(n, 2)), MetricSpec(MetricKind.EUCLIDEAN)
        if kind == "circle":
            return rng.uniform(0, 2 * np.pi, n), MetricSpec(MetricKind.CIRCLE)
        if kind == "sphere":
            return rng.normal(size=(n, 3)), MetricSpec(MetricKind.SPHERE3)
        return rng.normal(size=n), MetricSpec(MetricKind.EUCLIDEAN)

    kinds = ["int", "vec", "circle", "sphere", "scalar"]
    mats = []
    for _ in range(2):
        obj, spec = objects(kinds[rng.integers(len(kinds))])
        dup = rng.integers(0, n, size=rng.integers(0, n // 2 + 1))
        for d in dup:
            obj[rng.integers(n)] = obj[d]
        mats.append(pairwise_distances(obj, spec))
    style = rng.integers(3)
    if style == 0:
        w = np.full(n, 1.0 / n)
    else:
        w = rng.random(n)
        if style == 2:
            w[rng.random(n) < 0.3] = 0.0
            if w.sum() == 0:
                w[0] = 1.0
        w = w / w.sum()
    return mats[0], mats[1], w


@dataclass
class OracleReport:
    trials: int
    max_deviation: float
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures


def oracle_check(trials: int = 100, max_n: int = 7, min_n: int = 3, seed: int = 0,
                 tol: float = 1e-10, weight_scale: float = 1.0) -> OracleReport:
    """Compare the factorized statistic with the six-index sum on random inputs."""
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if not 3 <= min_n <= max_n <= 10:
        raise ValidationError(f"need 3 <= min_n <= max_n <= 10, got {min_n}..{max_n}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = []
    for t in range(trials):
        n = int(rng.integers(min_n, max_n + 1))
        DX, DY, w = random_oracle_instance(rng, n)
        w = w * weight_scale
        fast = w_statistic(DX, DY, w)
        slow = w_statistic_bruteforce(DX, DY, w)
        dev = abs(fast - slow)
        worst = max(worst, dev)
        if dev > tol:
            failures.append({"trial": t, "n": n, "DX": DX.tolist(), "DY": DY.tolist(),
                             "w": w.tolist(), "fast": fast, "bruteforce": slow})
    return OracleReport(trials, worst, failures)
