"""Dissimilarities for the supported object spaces.

Every path that builds a pairwise matrix ends in
:func:`validate_distance_matrix`, so downstream code can assume a square,
finite, symmetric, nonnegative matrix with a zero diagonal.

Ball statistics only compare distances from a common center, so any fixed
positive rescaling of a metric leaves all downstream quantities unchanged.
This is why the L2 curve distance below drops the grid-spacing weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import DistanceMatrixError, ValidationError

UNIT_NORM_TOL = 1e-8
SYMMETRY_TOL = 1e-9
TWO_PI = 2.0 * math.pi


class MetricKind(str, Enum):
    EUCLIDEAN = "euclidean"
    L2_GRID = "l2_grid"
    SPHERE3 = "sphere3"
    CIRCLE = "circle"
    KENDALL_SHAPE2D = "kendall_shape2d"
    PRECOMPUTED = "precomputed"


# CLI spellings
METRIC_ALIASES = {
    "euclidean": MetricKind.EUCLIDEAN,
    "l2": MetricKind.L2_GRID,
    "l2_grid": MetricKind.L2_GRID,
    "sphere": MetricKind.SPHERE3,
    "sphere3": MetricKind.SPHERE3,
    "circle": MetricKind.CIRCLE,
    "shape": MetricKind.KENDALL_SHAPE2D,
    "kendall_shape2d": MetricKind.KENDALL_SHAPE2D,
    "precomputed": MetricKind.PRECOMPUTED,
}


@dataclass(frozen=True)
class MetricSpec:
    """Which metric to use and the shape hints it needs.

    ``grid_length`` applies to ``l2_grid`` curves, ``landmarks`` to
    ``kendall_shape2d`` configurations (``None`` means infer from the data).
    """

    kind: MetricKind
    grid_length: int = 17
    landmarks: int | None = None

    @classmethod
    def parse(cls, name: str, **hints) -> "MetricSpec":
        try:
            kind = METRIC_ALIASES[name.lower()]
        except KeyError:
            raise ValidationError(f"unknown metric {name!r}") from None
        return cls(kind, **hints)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "grid_length": self.grid_length,
                "landmarks": self.landmarks}


def _as_finite_vector(a, name: str) -> np.ndarray:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains non-finite entries")
    return a


def euclidean_distance(a, b) -> float:
    a = _as_finite_vector(a, "a")
    b = _as_finite_vector(b, "b")
    if a.shape != b.shape:
        raise ValidationError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def l2_grid_distance(f, g, grid_length: int | None = 17) -> float:
    """Euclidean norm of the sample-wise difference of two gridded curves."""
    f = _as_finite_vector(f, "f")
    g = _as_finite_vector(g, "g")
    if f.shape != g.shape:
        raise ValidationError(f"grid length mismatch: {f.size} vs {g.size}")
    if grid_length is not None and f.size != grid_length:
        raise ValidationError(f"expected {grid_length} grid samples, got {f.size}")
    return float(np.sqrt(np.sum((f - g) ** 2)))


def _unit_rows(u: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(u, axis=-1, keepdims=True)
    if np.any(norms == 0.0):
        raise ValidationError("zero-norm direction")
    off = np.abs(norms - 1.0) > UNIT_NORM_TOL
    if np.any(off):
        u = np.where(off, u / norms, u)
    return u


def sphere_geodesic(u, v) -> float:
    u = _unit_rows(_as_finite_vector(u, "u"))
    v = _unit_rows(_as_finite_vector(v, "v"))
    if u.shape != (3,) or v.shape != (3,):
        raise ValidationError("sphere points must be 3-vectors")
    return float(np.arccos(np.clip(u @ v, -1.0, 1.0)))


def circle_geodesic(theta1: float, theta2: float) -> float:
    if not (math.isfinite(theta1) and math.isfinite(theta2)):
        raise ValidationError("non-finite angle")
    delta = abs(math.fmod(theta1, TWO_PI) - math.fmod(theta2, TWO_PI)) % TWO_PI
    return min(delta, TWO_PI - delta)


def _preshape(c: np.ndarray) -> np.ndarray:
    """Centered, unit-norm complex representation of k x 2 landmark arrays.

    Accepts shape (k, 2) or (n, k, 2); returns (k,) or (n, k) complex.
    """
    if c.shape[-1] != 2 or c.shape[-2] < 3:
        raise ValidationError("shape configurations need k >= 3 landmarks of 2 coordinates")
    z = c[..., 0] + 1j * c[..., 1]
    z = z - z.mean(axis=-1, keepdims=True)
    norm = np.sqrt(np.sum(np.abs(z) ** 2, axis=-1, keepdims=True))
    if np.any(norm == 0.0):
        raise ValidationError("degenerate shape configuration (all landmarks coincide)")
    return z / norm


def kendall_shape_distance(c1, c2) -> float:
    """Riemannian (great-circle) distance in planar Kendall shape space.

    Quotients out translation, scale and rotation, but not reflection.
    """
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    if c1.shape != c2.shape:
        raise ValidationError(f"landmark count mismatch: {c1.shape} vs {c2.shape}")
    if not (np.all(np.isfinite(c1)) and np.all(np.isfinite(c2))):
        raise ValidationError("non-finite landmark coordinates")
    z1, z2 = _preshape(c1), _preshape(c2)
    return float(np.arccos(np.clip(abs(np.vdot(z1, z2)), 0.0, 1.0)))


def validate_distance_matrix(D, atol: float = SYMMETRY_TOL) -> np.ndarray:
    """Check symmetry, zero diagonal, finiteness and nonnegativity.

    Returns the matrix unchanged (as a float array). Raises
    :class:`DistanceMatrixError` naming the first offending ``(i, j)``.
    The triangle inequality is deliberately not checked.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise DistanceMatrixError(f"distance matrix must be square, got shape {D.shape}")
    if D.shape[0] < 1:
        raise DistanceMatrixError("empty distance matrix")
    bad = ~np.isfinite(D)
    if bad.any():
        raise DistanceMatrixError("non-finite entry", _first(bad))
    bad = D < 0
    if bad.any():
        raise DistanceMatrixError("negative entry", _first(bad))
    diag = np.abs(np.diag(D)) > atol
    if diag.any():
        i = int(np.argmax(diag))
        raise DistanceMatrixError("nonzero diagonal", (i, i))
    bad = np.abs(D - D.T) > atol
    if bad.any():
        raise DistanceMatrixError("asymmetric entry", _first(bad))
    return D


def _first(mask: np.ndarray) -> tuple[int, int]:
    i, j = np.argwhere(mask)[0]
    return int(i), int(j)


def _mirror_upper(G: np.ndarray) -> np.ndarray:
    # BLAS products are not guaranteed exactly symmetric
    G = np.triu(G, 1)
    return G + G.T


def pairwise_distances(objects, spec: MetricSpec | str) -> np.ndarray:
    """Build the n x n distance matrix of ``objects`` under ``spec``.

    Object encodings by metric kind:

    * ``euclidean``: shape (n,) scalars or (n, d) vectors
    * ``l2_grid``: shape (n, grid_length) curve samples
    * ``sphere3``: shape (n, 3) directions (renormalized if off unit norm)
    * ``circle``: shape (n,) angles in radians
    * ``kendall_shape2d``: shape (n, k, 2) or (n, 2k) as x1, y1, ..., xk, yk
    * ``precomputed``: an n x n matrix, validated and passed through
    """
    if isinstance(spec, str):
        spec = MetricSpec.parse(spec)
    kind = spec.kind
    X = np.asarray(objects, dtype=float)
    if kind is MetricKind.PRECOMPUTED:
        return validate_distance_matrix(X)
    if X.shape[0] < 2:
        raise ValidationError("need at least two objects")
    if not np.all(np.isfinite(X)):
        raise ValidationError("objects contain non-finite entries")

    if kind is MetricKind.EUCLIDEAN:
        if X.ndim == 1:
            D = np.abs(X[:, None] - X[None, :])
        else:
            D = squareform(pdist(X.reshape(X.shape[0], -1)))
    elif kind is MetricKind.L2_GRID:
        if X.ndim != 2 or X.shape[1] != spec.grid_length:
            raise ValidationError(
                f"l2_grid expects shape (n, {spec.grid_length}), got {X.shape}")
        D = squareform(pdist(X))
    elif kind is MetricKind.SPHERE3:
        if X.ndim != 2 or X.shape[1] != 3:
            raise ValidationError(f"sphere3 expects shape (n, 3), got {X.shape}")
        U = _unit_rows(X)
        D = _mirror_upper(np.arccos(np.clip(U @ U.T, -1.0, 1.0)))
    elif kind is MetricKind.CIRCLE:
        theta = np.mod(X.reshape(-1), TWO_PI)
        delta = np.abs(theta[:, None] - theta[None, :])
        D = np.minimum(delta, TWO_PI - delta)
    elif kind is MetricKind.KENDALL_SHAPE2D:
        if X.ndim == 2:
            if X.shape[1] % 2:
                raise ValidationError("flattened shapes need an even column count")
            X = X.reshape(X.shape[0], -1, 2)
        if spec.landmarks is not None and X.shape[1] != spec.landmarks:
            raise ValidationError(f"expected {spec.landmarks} landmarks, got {X.shape[1]}")
        Zc = _preshape(X)
        G = np.abs(Zc @ Zc.conj().T)
        D = _mirror_upper(np.arccos(np.clip(G, 0.0, 1.0)))
    else:  # pragma: no cover
        raise ValidationError(f"unsupported metric {kind}")
    return validate_distance_matrix(D)


def predictor_distances(x) -> np.ndarray:
    """Distances for one predictor: absolute differences for a column,
    Euclidean for a multi-column block."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1 or x.shape[1] == 1:
        x = x.reshape(-1)
        return np.abs(x[:, None] - x[None, :])
    return squareform(pdist(x))
