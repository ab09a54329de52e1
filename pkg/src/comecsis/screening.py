"""Conditional screening with the COME marginal utility.

Each predictor column is scored by its tau-hat against the response given
Z; the d_n highest-scoring predictors are kept. Ties in utility are broken
by ascending predictor index so reports are reproducible.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import prepare_conditioning, tau_from_windows
from .density import as_conditioning, bandwidth
from .errors import ValidationError
from .metrics import predictor_distances

THREADS_ENV = "COMECSIS_THREADS"


def default_threads() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            n = int(value)
        except ValueError:
            raise ValidationError(f"{THREADS_ENV} must be an integer, got {value!r}") from None
        if n < 1:
            raise ValidationError(f"{THREADS_ENV} must be >= 1, got {n}")
        return n
    return 1


def model_size(n: int, gamma: int = 1) -> int:
    """gamma * floor(n / ln n)."""
    if n < 3 or gamma < 1:
        raise ValidationError(f"model_size needs n >= 3 and gamma >= 1, got n={n}, gamma={gamma}")
    return int(gamma) * int(math.floor(n / math.log(n)))


def rank_utilities(utilities) -> np.ndarray:
    """Indices by decreasing utility, ties by ascending index."""
    u = np.asarray(utilities, dtype=float)
    return np.lexsort((np.arange(u.size), -u))


@dataclass
class ScreeningReport:
    """Outcome of one screening run. Indices are 0-based."""

    utilities: np.ndarray
    ranking: np.ndarray
    d_n: int
    h: float
    config: dict = field(default_factory=dict)

    @property
    def selected(self) -> np.ndarray:
        return self.ranking[: min(self.d_n, self.ranking.size)]

    def top(self, d: int) -> np.ndarray:
        return self.ranking[:d]

    def to_dict(self) -> dict:
        """JSON-ready form; predictor indices are reported 1-based."""
        return {
            "config": self.config,
            "h": self.h,
            "d_n": self.d_n,
            "utilities": [float(v) for v in self.utilities],
            "ranking": [int(r) + 1 for r in self.ranking],
            "selected": [int(r) + 1 for r in self.selected],
        }


def _predictor_blocks(X):
    """Normalize X to a list of per-predictor arrays (columns or blocks)."""
    if isinstance(X, np.ndarray):
        if X.ndim != 2:
            raise ValidationError(f"X must be 2-d (n, p), got {X.ndim}-d")
        return [X[:, r] for r in range(X.shape[1])]
    return [np.asarray(b, dtype=float) for b in X]


def compute_utilities(X, DY, Z, h: float | None = None, n_jobs: int | None = None,
                      standardize: bool = True, executor=None) -> tuple[np.ndarray, float]:
    """tau-hat for every predictor; returns (utilities, bandwidth used).

    ``X`` is an (n, p) array, or a sequence of per-predictor arrays when some
    predictors are multi-column (their distance is Euclidean).
    """
    blocks = _predictor_blocks(X)
    DY = np.ascontiguousarray(DY, dtype=float)
    Z = as_conditioning(Z)
    n = DY.shape[0]
    if DY.shape != (n, n):
        raise ValidationError(f"DY must be square, got {DY.shape}")
    if Z.n != n:
        raise ValidationError(f"Z has n={Z.n}, response has n={n}")
    if not blocks:
        raise ValidationError("no predictors")
    for r, b in enumerate(blocks):
        if b.shape[0] != n:
            raise ValidationError(f"predictor {r} has {b.shape[0]} rows, expected {n}")
        if not np.all(np.isfinite(b)):
            raise ValidationError(f"predictor {r} has non-finite entries")
    _, h, ptr, idx = prepare_conditioning(Z, h, standardize)

    def one(b):
        return tau_from_windows(predictor_distances(b), DY, ptr, idx).tau_hat

    n_jobs = default_threads() if n_jobs is None else n_jobs
    if executor is not None:
        utilities = list(executor.map(one, blocks))
    elif n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            utilities = list(pool.map(one, blocks))
    else:
        utilities = [one(b) for b in blocks]
    return np.array(utilities, dtype=float), h


def come_csis(X, DY, Z, d_n: int, h: float | None = None, n_jobs: int | None = None,
              standardize: bool = True, config: dict | None = None,
              executor=None) -> ScreeningReport:
    """Rank predictors by tau-hat and keep the top ``d_n``."""
    if d_n < 1:
        raise ValidationError(f"d_n must be >= 1, got {d_n}")
    utilities, h_used = compute_utilities(X, DY, Z, h, n_jobs, standardize, executor)
    return ScreeningReport(utilities, rank_utilities(utilities), int(d_n), h_used,
                           dict(config or {}))


def iterative_come_csis(X, DY, Z0, s: int, h_rule=bandwidth, n_jobs: int | None = None,
                        standardize: bool = True) -> list[int]:
    """Iteratively move the top predictor into the conditioning set.

    Each round scores the remaining predictors given the current Z, picks
    the best one (lowest index on ties), appends it to Z and recomputes the
    bandwidth as ``h_rule(n, d_z)``. Returns 0-based indices in selection
    order.
    """
    blocks = _predictor_blocks(X)
    p = len(blocks)
    if not 1 <= s <= p:
        raise ValidationError(f"need 1 <= s <= p={p}, got s={s}")
    Z = as_conditioning(Z0)
    remaining = list(range(p))
    chosen: list[int] = []
    while len(chosen) < s:
        h = h_rule(Z.n, Z.d_z)
        utilities, _ = compute_utilities([blocks[r] for r in remaining], DY, Z, h,
                                         n_jobs, standardize)
        best = remaining[int(rank_utilities(utilities)[0])]
        chosen.append(best)
        remaining.remove(best)
        Z = Z.append(blocks[best])
    return chosen
