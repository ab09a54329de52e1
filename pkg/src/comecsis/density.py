"""Rectangle-kernel weights for the conditioning variable.

The kernel is the product (sup-norm) box kernel with the same bandwidth on
every coordinate. Weights are only ever evaluated at sample points, so the
point itself always lies in its own window and normalization never divides
by zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class ConditioningSample:
    """n observations of a d_z-dimensional conditioning variable."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise ValidationError(f"conditioning sample must be 1-d or 2-d, got {v.ndim}-d")
        if v.shape[0] < 2 or v.shape[1] < 1:
            raise ValidationError(f"need n >= 2 and d_z >= 1, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValidationError("conditioning sample has non-finite entries")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d_z(self) -> int:
        return self.values.shape[1]

    def standardized(self) -> "ConditioningSample":
        """Center each coordinate and scale it to unit sample variance.

        Constant coordinates are centered only.
        """
        v = self.values - self.values.mean(axis=0)
        sd = v.std(axis=0, ddof=1)
        sd[sd == 0.0] = 1.0
        return ConditioningSample(v / sd)

    def append(self, cols) -> "ConditioningSample":
        cols = np.asarray(cols, dtype=float)
        if cols.ndim == 1:
            cols = cols[:, None]
        return ConditioningSample(np.hstack([self.values, cols]))


@dataclass(frozen=True)
class WeightVector:
    u: int
    weights: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.weights > 0)


def as_conditioning(Z) -> ConditioningSample:
    return Z if isinstance(Z, ConditioningSample) else ConditioningSample(Z)


def bandwidth(n: int, d_z: int = 1) -> float:
    """Default bandwidth n^(-1/(6 d_z))."""
    if n < 2 or d_z < 1:
        raise ValidationError(f"bandwidth needs n >= 2 and d_z >= 1, got n={n}, d_z={d_z}")
    return float(n ** (-1.0 / (6.0 * d_z)))


def window_mask(Z, u: int, h: float) -> np.ndarray:
    Z = as_conditioning(Z)
    if not 0 <= u < Z.n:
        raise ValidationError(f"evaluation index {u} out of range for n={Z.n}")
    if not h > 0:
        raise ValidationError(f"bandwidth must be positive, got {h}")
    return np.max(np.abs(Z.values - Z.values[u]), axis=1) <= h


def kernel_weights(Z, u: int, h: float) -> WeightVector:
    """Normalized box-kernel weights at sample point ``u`` (0-based)."""
    raw = window_mask(Z, u, h).astype(float)
    return WeightVector(u, raw / raw.sum())


def windows(Z, h: float) -> list[np.ndarray]:
    """Sorted in-window indices for every evaluation point."""
    Z = as_conditioning(Z)
    if not h > 0:
        raise ValidationError(f"bandwidth must be positive, got {h}")
    v = Z.values
    inside = np.max(np.abs(v[:, None, :] - v[None, :, :]), axis=2) <= h
    return [np.flatnonzero(row) for row in inside]
