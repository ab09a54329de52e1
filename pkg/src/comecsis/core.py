"""Conditional ball covariance and correlation estimators.

For one evaluation point z with normalized weights w, the weighted V-process
over six indices

    W(z) = sum_{i,j,k,l,s,t} w_i w_j w_k w_l w_s w_t eta^X_{ij,klst} eta^Y_{ij,klst}

collapses, because eta_{ij,klst} = (x_k - x_t)(x_l - x_s) / 2 for the ball
indicators x_k = I(d(X_i, X_k) <= d(X_i, X_j)), into

    W(z) = sum_{i,j} w_i w_j (a_ij - b_ij c_ij)^2

with a, b, c the weighted joint, X-marginal and Y-marginal in-ball masses
(a ball profile). :func:`w_statistic_bruteforce` evaluates the six-index sum
literally and is the reference this identity is tested against.

The population targets behind these estimators are the conditional ball
covariance V^2(X, Y | Z) and the global correlation tau = E[R^2(X, Y | Z)];
neither has a runtime representation here.

Under the box kernel every in-window sample carries the same weight 1/m, so
the profiles are integer counts divided by m and

    W(z) = sum_{i,j in window} (m * n_a - n_b * n_c)^2 / m^6.

The fast path accumulates that numerator in int64, which makes each
per-point R^2 exact and independent of summation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .density import ConditioningSample, as_conditioning, bandwidth, windows
from .errors import ValidationError

WEIGHT_SUM_TOL = 1e-9
BRUTEFORCE_MAX_N = 12
R2_DEGENERATE = 1e-300
# |m * n_a - n_b * n_c| <= m^2 / 4, so the int64 accumulator holds m^6 / 16
MAX_EXACT_WINDOW = 2000


@dataclass(frozen=True)
class ComeResult:
    """Global conditional ball correlation estimate with per-point diagnostics.

    ``w_xy``, ``w_xx``, ``w_yy`` and ``r2`` are indexed by evaluation point
    (the sample points, in input order); ``window_sizes`` counts the samples
    with positive weight at each point.
    """

    tau_hat: float
    w_xy: np.ndarray
    w_xx: np.ndarray
    w_yy: np.ndarray
    r2: np.ndarray
    window_sizes: np.ndarray

    @property
    def per_point(self) -> list[tuple[float, float, float, float]]:
        return list(zip(self.w_xy.tolist(), self.w_xx.tolist(),
                        self.w_yy.tolist(), self.r2.tolist()))


def _check_pair(DX, DY):
    DX = np.ascontiguousarray(DX, dtype=np.float64)
    DY = np.ascontiguousarray(DY, dtype=np.float64)
    if DX.ndim != 2 or DX.shape[0] != DX.shape[1]:
        raise ValidationError(f"DX must be square, got {DX.shape}")
    if DY.shape != DX.shape:
        raise ValidationError(f"size mismatch: DX {DX.shape} vs DY {DY.shape}")
    return DX, DY


def _check_weights(w, n, require_normalized=True):
    w = np.ascontiguousarray(w, dtype=np.float64)
    if w.shape != (n,):
        raise ValidationError(f"weights must have shape ({n},), got {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValidationError("weights must be finite and nonnegative")
    if require_normalized and abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ValidationError(f"weights must sum to 1, got {w.sum()!r}")
    return w


def ball_profile(D, w) -> np.ndarray:
    """b[i, j] = sum_k w_k I(D[i, k] <= D[i, j]); ties count as inside."""
    D = np.asarray(D, dtype=float)
    w = _check_weights(w, D.shape[0], require_normalized=False)
    if D.shape != (w.size, w.size):
        raise ValidationError(f"size mismatch: D {D.shape} vs w {w.shape}")
    inside = D[:, None, :] <= D[:, :, None]
    return inside @ w


def joint_profile(DX, DY, w) -> np.ndarray:
    """a[i, j] = sum_k w_k I(DX[i, k] <= DX[i, j]) I(DY[i, k] <= DY[i, j])."""
    DX, DY = _check_pair(DX, DY)
    w = _check_weights(w, DX.shape[0], require_normalized=False)
    inside = (DX[:, None, :] <= DX[:, :, None]) & (DY[:, None, :] <= DY[:, :, None])
    return inside @ w


@numba.njit(cache=True, nogil=True)
def _gather(D, idx):
    m = idx.size
    out = np.empty((m, m))
    for a in range(m):
        ia = idx[a]
        for b in range(m):
            out[a, b] = D[ia, idx[b]]
    return out


@numba.njit(cache=True, nogil=True)
def _window_counts(DX, DY, idx):
    """Integer numerators of (W_xy, W_xx, W_yy) * m^6 for a uniform window."""
    m = idx.size
    sx = _gather(DX, idx)
    sy = _gather(DY, idx)
    s_xy = np.int64(0)
    s_xx = np.int64(0)
    s_yy = np.int64(0)
    mm = np.int64(m)
    for i in range(m):
        for j in range(m):
            rx = sx[i, j]
            ry = sy[i, j]
            nb = np.int64(0)
            nc = np.int64(0)
            na = np.int64(0)
            for k in range(m):
                inx = sx[i, k] <= rx
                iny = sy[i, k] <= ry
                nb += inx
                nc += iny
                na += inx and iny
            t = mm * na - nb * nc
            s_xy += t * t
            t = mm * nb - nb * nb
            s_xx += t * t
            t = mm * nc - nc * nc
            s_yy += t * t
    return s_xy, s_xx, s_yy


@numba.njit(cache=True, nogil=True)
def _window_weighted(DX, DY, idx, w):
    """(W_xy, W_xx, W_yy) for arbitrary weights on the index set ``idx``."""
    m = idx.size
    sx = _gather(DX, idx)
    sy = _gather(DY, idx)
    ws = np.empty(m)
    for a in range(m):
        ws[a] = w[idx[a]]
    w_xy = 0.0
    w_xx = 0.0
    w_yy = 0.0
    for i in range(m):
        for j in range(m):
            rx = sx[i, j]
            ry = sy[i, j]
            b = 0.0
            c = 0.0
            a = 0.0
            for k in range(m):
                inx = sx[i, k] <= rx
                iny = sy[i, k] <= ry
                if inx:
                    b += ws[k]
                if iny:
                    c += ws[k]
                if inx and iny:
                    a += ws[k]
            wij = ws[i] * ws[j]
            w_xy += wij * (a - b * c) ** 2
            w_xx += wij * (b - b * b) ** 2
            w_yy += wij * (c - c * c) ** 2
    return w_xy, w_xx, w_yy


@numba.njit(cache=True, nogil=True)
def _all_window_counts(DX, DY, ptr, idx):
    n = ptr.size - 1
    out = np.empty((n, 3), dtype=np.int64)
    for u in range(n):
        s_xy, s_xx, s_yy = _window_counts(DX, DY, idx[ptr[u]:ptr[u + 1]])
        out[u, 0] = s_xy
        out[u, 1] = s_xx
        out[u, 2] = s_yy
    return out


def _is_uniform(w_support: np.ndarray) -> bool:
    return w_support.size <= MAX_EXACT_WINDOW and bool(np.all(w_support == w_support[0]))


def point_statistics(DX, DY, w) -> tuple[float, float, float]:
    """(W_xy, W_xx, W_yy) at one evaluation point with normalized weights ``w``."""
    DX, DY = _check_pair(DX, DY)
    w = _check_weights(w, DX.shape[0])
    idx = np.flatnonzero(w > 0)
    if _is_uniform(w[idx]):
        m6 = float(idx.size) ** 6
        counts = _window_counts(DX, DY, idx)
        return tuple(float(c) / m6 for c in counts)
    return tuple(float(v) for v in _window_weighted(DX, DY, idx, w))


def w_statistic(DX, DY, w) -> float:
    """Weighted V-process estimate of the conditional ball covariance at one point."""
    return point_statistics(DX, DY, w)[0]


def w_statistic_bruteforce(DX, DY, w) -> float:
    """Literal six-index weighted sum of eta^X * eta^Y (O(n^6); n <= 12).

    Reference implementation for testing only; shares no code with the
    factorized path beyond input checks.
    """
    DX, DY = _check_pair(DX, DY)
    n = DX.shape[0]
    if n > BRUTEFORCE_MAX_N:
        raise ValidationError(f"brute-force oracle limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    w = _check_weights(w, n, require_normalized=False)
    # delta[i, j, k] = I(X_k in closed ball centered X_i with radius d(X_i, X_j))
    delta_x = (DX[:, None, :] <= DX[:, :, None]).astype(float)
    delta_y = (DY[:, None, :] <= DY[:, :, None]).astype(float)
    w4 = np.einsum("k,l,s,t->klst", w, w, w, w)

    def eta(d):
        pair = np.outer(d, d)  # delta_{ij,kl}
        return (pair[:, :, None, None] + pair[None, None, :, :]
                - pair[:, None, :, None] - pair[None, :, None, :]) / 2.0

    total = 0.0
    for i in range(n):
        for j in range(n):
            inner = np.sum(w4 * eta(delta_x[i, j]) * eta(delta_y[i, j]))
            total += w[i] * w[j] * inner
    return float(total)


def _ratio(w_xy, w_xx, w_yy):
    w_xy = np.asarray(w_xy, dtype=float)
    denom = np.asarray(w_xx, dtype=float) * np.asarray(w_yy, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = np.where(denom > R2_DEGENERATE, w_xy / np.sqrt(denom), 0.0)
    return np.clip(r2, 0.0, 1.0)


def r_squared(DX, DY, w) -> float:
    """Conditional ball correlation estimate at one point; 0 when degenerate."""
    return float(_ratio(*point_statistics(DX, DY, w)))


def window_index(Z, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Box-kernel windows of every sample point in CSR form (ptr, idx)."""
    wins = windows(Z, h)
    ptr = np.zeros(len(wins) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([w.size for w in wins])
    idx = np.concatenate(wins).astype(np.int64)
    return ptr, idx


def prepare_conditioning(Z, h: float | None = None, standardize: bool = True):
    """Standardize Z (optionally), pick the bandwidth, and build windows."""
    Z = as_conditioning(Z)
    if standardize:
        Z = Z.standardized()
    if h is None:
        h = bandwidth(Z.n, Z.d_z)
    elif not h > 0:
        raise ValidationError(f"bandwidth must be positive, got {h}")
    ptr, idx = window_index(Z, h)
    return Z, float(h), ptr, idx


def tau_from_windows(DX, DY, ptr, idx) -> ComeResult:
    """tau-hat given precomputed box-kernel windows (uniform weights)."""
    DX, DY = _check_pair(DX, DY)
    n = DX.shape[0]
    if ptr.size != n + 1:
        raise ValidationError(f"window index built for n={ptr.size - 1}, data has n={n}")
    sizes = np.diff(ptr)
    if sizes.max() > MAX_EXACT_WINDOW:
        raise ValidationError(f"window of {sizes.max()} samples exceeds the exact-count limit")
    counts = _all_window_counts(DX, DY, ptr, idx)
    m6 = sizes.astype(float) ** 6
    w_xy, w_xx, w_yy = (counts[:, c] / m6 for c in range(3))
    # R^2 from the integer numerators: the m^6 scale cancels exactly
    r2 = _ratio(counts[:, 0].astype(float), counts[:, 1].astype(float),
                counts[:, 2].astype(float))
    tau = math.fsum(r2.tolist()) / n
    return ComeResult(tau, w_xy, w_xx, w_yy, r2, sizes)


def tau_hat(DX, DY, Z, h: float | None = None, standardize: bool = True) -> ComeResult:
    """Global conditional ball correlation estimate of X and Y given Z.

    Parameters
    ----------
    DX, DY : (n, n) array
        Distance matrices of the predictor and the response.
    Z : array or ConditioningSample
        Conditioning sample, shape (n,) or (n, d_z).
    h : float, optional
        Box-kernel bandwidth; defaults to n^(-1/(6 d_z)).
    standardize : bool
        Scale each coordinate of Z to unit sample variance before windowing.
    """
    DX, DY = _check_pair(DX, DY)
    Z = as_conditioning(Z)
    if Z.n != DX.shape[0]:
        raise ValidationError(f"size mismatch: Z has n={Z.n}, distances have n={DX.shape[0]}")
    _, _, ptr, idx = prepare_conditioning(Z, h, standardize)
    return tau_from_windows(DX, DY, ptr, idx)


__all__ = [
    "ComeResult", "ConditioningSample", "ball_profile", "joint_profile",
    "point_statistics", "w_statistic", "w_statistic_bruteforce", "r_squared",
    "tau_hat", "tau_from_windows", "prepare_conditioning", "window_index",
]
