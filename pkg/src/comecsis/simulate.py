"""Synthetic designs for screening experiments.

(Z, X_1, ..., X_p) is zero-mean Gaussian with covariance 2 rho^|i-j|, with Z
as the first coordinate. Responses are either curves on a 17-point grid over
[0, 8 pi] built from four cubic Bernstein basis functions (models "1a",
"1b"), points on the unit sphere ("2a") or angles on the unit circle ("2b").

Predictor indices are 0-based throughout; ``active_set`` for models 1a/1b is
(0, 2, 5), i.e. X_1, X_3, X_6, and for 2a/2b it is (2, 5, 8).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .errors import ValidationError
from .metrics import MetricKind, MetricSpec

GRID_LENGTH = 17
T_MAX = 8.0 * math.pi
TIME_GRID = np.linspace(0.0, T_MAX, GRID_LENGTH)

FUNCTIONAL_MODELS = ("1a", "1b")
DIRECTIONAL_MODELS = ("2a", "2b")
MODELS = FUNCTIONAL_MODELS + DIRECTIONAL_MODELS
ACTIVE_SETS = {"1a": (0, 2, 5), "1b": (0, 2, 5), "2a": (2, 5, 8), "2b": (2, 5, 8)}

# (upper-median arcs, lower-median arcs) per Z tercile; each pair is
# (arc taken when omega = 1, arc taken when omega = 0), in units of pi / 6
_ARCS_2B = {
    1: (((0, 1), (6, 7)), ((3, 4), (9, 10))),
    2: (((1, 2), (7, 8)), ((4, 5), (10, 11))),
    3: (((2, 3), (8, 9)), ((5, 6), (11, 12))),
}
ARCS_2B = tuple(
    (a * math.pi / 6, b * math.pi / 6)
    for tercile in _ARCS_2B.values() for half in tercile for (a, b) in half
)


@dataclass
class SimulatedDataset:
    Z: np.ndarray            # (n, 1)
    X: np.ndarray            # (n, p)
    response: np.ndarray     # curves (n, 17), directions (n, 3) or angles (n,)
    metric: MetricSpec
    active_set: tuple[int, ...]
    model: str
    seed: object = None
    params: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def replication_seed(master_seed: int, rep: int) -> list[int]:
    """Seed entropy for replication ``rep``; independent across replications."""
    return [int(master_seed), int(rep)]


def sample_ar_gaussian(n: int, p: int, rho: float, seed=None):
    """Draw (Z, X) with Cov = 2 rho^|i-j| over the p + 1 coordinates.

    Uses the scaled AR(1) recursion V_1 = sqrt(2) e_1,
    V_{j+1} = rho V_j + sqrt(2 (1 - rho^2)) e_{j+1}, which avoids a dense
    (p + 1) x (p + 1) factorization.
    """
    if not abs(rho) < 1:
        raise ValidationError(f"|rho| must be < 1, got {rho}")
    if n < 1 or p < 1:
        raise ValidationError(f"need n, p >= 1, got n={n}, p={p}")
    rng = make_rng(seed)
    e = rng.standard_normal((n, p + 1))
    e[:, 0] *= math.sqrt(2.0)
    e[:, 1:] *= math.sqrt(2.0 * (1.0 - rho * rho))
    V = lfilter([1.0], [1.0, -rho], e, axis=1)
    return V[:, 0].copy(), np.ascontiguousarray(V[:, 1:])


def bernstein_basis(t) -> np.ndarray:
    """Cubic Bernstein basis on [0, 8 pi]; returns shape (..., 4)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > T_MAX) or not np.all(np.isfinite(t)):
        raise ValidationError("t must lie in [0, 8 pi]")
    s = t / T_MAX
    r = 1.0 - s
    return np.stack([r ** 3, 3 * s * r ** 2, 3 * s ** 2 * r, s ** 3], axis=-1)


BASIS_ON_GRID = bernstein_basis(TIME_GRID)  # (17, 4)


def functional_response(model: str, Z, X, noise) -> np.ndarray:
    """Curves Y(t_j) for models 1a / 1b given Z (n,), X (n, >= 6) and noise (n, 17)."""
    Z = np.asarray(Z, dtype=float).reshape(-1)
    X1, X3, X6 = X[:, 0], X[:, 2], X[:, 5]
    if model == "1a":
        coef = np.column_stack([Z, X1, X3, X6 ** 2])
    elif model == "1b":
        coef = np.column_stack([Z, 2.0 * X1 * X3, Z * X3, Z * X6])
    else:
        raise ValidationError(f"unknown functional model {model!r}")
    return coef @ BASIS_ON_GRID.T + noise


def white_noise(rng, n: int, grid_length: int = GRID_LENGTH) -> np.ndarray:
    return rng.standard_normal((n, grid_length))


def gen_functional(model: str, n: int = 150, p: int = 2000, rho: float = 0.0,
                   seed=None, noise=white_noise) -> SimulatedDataset:
    """Functional-response design; ``noise(rng, n)`` draws the error curves."""
    if model not in FUNCTIONAL_MODELS:
        raise ValidationError(f"unknown functional model {model!r}")
    if p < 6:
        raise ValidationError(f"model {model} needs p >= 6, got {p}")
    rng = make_rng(seed)
    Z, X = sample_ar_gaussian(n, p, rho, rng)
    Y = functional_response(model, Z, X, noise(rng, n))
    return SimulatedDataset(Z[:, None], X, Y, MetricSpec(MetricKind.L2_GRID, GRID_LENGTH),
                            ACTIVE_SETS[model], model, seed, {"n": n, "p": p, "rho": rho})


def sphere_response(Z, X, verbatim: bool = False) -> np.ndarray:
    """Model 2a directions with phi = Z X_3 and theta = (X_6 + X_9) / 2.

    The default is the standard spherical parameterization. ``verbatim``
    uses (sin t cos f, cos t sin f, cos t) instead, renormalized to unit
    length.
    """
    Z = np.asarray(Z, dtype=float).reshape(-1)
    phi = Z * X[:, 2]
    theta = 0.5 * (X[:, 5] + X[:, 8])
    if verbatim:
        Y = np.column_stack([np.sin(theta) * np.cos(phi),
                             np.cos(theta) * np.sin(phi),
                             np.cos(theta)])
        return Y / np.linalg.norm(Y, axis=1, keepdims=True)
    return np.column_stack([np.sin(theta) * np.cos(phi),
                            np.sin(theta) * np.sin(phi),
                            np.cos(theta)])


def z_terciles(Z) -> np.ndarray:
    """Tercile label in {1, 2, 3} from the sample 1/3 and 2/3 quantiles."""
    Z = np.asarray(Z, dtype=float).reshape(-1)
    q1, q2 = np.quantile(Z, [1 / 3, 2 / 3])
    return np.where(Z <= q1, 1, np.where(Z <= q2, 2, 3))


def circle_response(Z, X, rng) -> np.ndarray:
    """Model 2b angles in [0, 2 pi) from the arc-mixture table."""
    rng = make_rng(rng)
    n = X.shape[0]
    tercile = z_terciles(Z)
    omega = rng.integers(0, 2, size=(n, 3))
    v = rng.random(n)
    angles = np.empty(n)
    for t, col in zip((1, 2, 3), (2, 5, 8)):
        upper = X[:, col] > np.median(X[:, col])
        for half, mask_half in ((0, upper), (1, ~upper)):
            arc_on, arc_off = _ARCS_2B[t][half]
            rows = (tercile == t) & mask_half
            w = omega[rows, t - 1] == 1
            lo = np.where(w, arc_on[0], arc_off[0]) * math.pi / 6
            angles[rows] = lo + v[rows] * math.pi / 6
    return np.mod(angles, 2.0 * math.pi)


def gen_directional(model: str, n: int = 150, p: int = 2000, rho: float = 0.0,
                    seed=None, verbatim_2a: bool = False) -> SimulatedDataset:
    if model not in DIRECTIONAL_MODELS:
        raise ValidationError(f"unknown directional model {model!r}")
    if p < 9:
        raise ValidationError(f"model {model} needs p >= 9, got {p}")
    rng = make_rng(seed)
    Z, X = sample_ar_gaussian(n, p, rho, rng)
    if model == "2a":
        Y = sphere_response(Z, X, verbatim_2a)
        spec = MetricSpec(MetricKind.SPHERE3)
    else:
        Y = circle_response(Z, X, rng)
        spec = MetricSpec(MetricKind.CIRCLE)
    params = {"n": n, "p": p, "rho": rho}
    if model == "2a":
        params["verbatim_2a"] = verbatim_2a
    return SimulatedDataset(Z[:, None], X, Y, spec, ACTIVE_SETS[model], model, seed, params)


def generate(model: str, n: int = 150, p: int = 2000, rho: float = 0.0, seed=None,
             **kwargs) -> SimulatedDataset:
    if model in FUNCTIONAL_MODELS:
        return gen_functional(model, n, p, rho, seed, **kwargs)
    if model in DIRECTIONAL_MODELS:
        return gen_directional(model, n, p, rho, seed, **kwargs)
    raise ValidationError(f"unknown model {model!r}; expected one of {MODELS}")


def gen_noise_categorical(n: int, q: int, seed=None) -> np.ndarray:
    """q independent columns over {0, 1, 2}, each with its own random
    probability triple drawn uniformly from the simplex."""
    if q < 1:
        raise ValidationError(f"q must be >= 1, got {q}")
    rng = make_rng(seed)
    probs = rng.dirichlet(np.ones(3), size=q)
    cum = np.cumsum(probs, axis=1)
    u = rng.random((n, q))
    return (u > cum[:, 0]).astype(float) + (u > cum[:, 1])


def noise_probabilities(q: int, seed=None) -> np.ndarray:
    """The probability triples :func:`gen_noise_categorical` uses for ``seed``."""
    return make_rng(seed).dirichlet(np.ones(3), size=q)
