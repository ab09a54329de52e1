
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from comecsis.core import (_window_weighted, ball_profile, joint_profile, point_statistics,
                           r_squared, tau_hat, w_statistic, w_statistic_bruteforce)
from comecsis.density import kernel_weights
from comecsis.errors import ValidationError
from comecsis.metrics import pairwise_distances
from comecsis.simulate import gen_functional

HALF = np.array([0.5, 0.5])


def scalar_D(values):
    return pairwise_distances(np.asarray(values, dtype=float), "euclidean")


@st.composite
def instances(draw, min_n=3, max_n=7, uniform=None):
    """Tie-prone distance pairs and normalized weights."""
    n = draw(st.integers(min_n, max_n))
    ints = st.integers(0, 3)
    x = np.array(draw(st.lists(ints, min_size=n, max_size=n)), dtype=float)
    y = np.array(draw(st.lists(st.floats(-3, 3) | ints.map(float), min_size=n, max_size=n)))
    use_uniform = draw(st.booleans()) if uniform is None else uniform
    if use_uniform:
        w = np.full(n, 1.0 / n)
    else:
        raw = np.array(draw(st.lists(st.floats(0, 1), min_size=n, max_size=n)))
        raw[draw(st.integers(0, n - 1))] += 0.5
        w = raw / raw.sum()
    return scalar_D(x), scalar_D(y), w


# --- profiles ----------------------------------------------------------------

def test_ball_profile_examples():
    assert np.array_equal(ball_profile(np.zeros((2, 2)), HALF), np.ones((2, 2)))
    b = ball_profile(scalar_D([0, 1]), HALF)
    assert b[0, 0] == 0.5 and b[0, 1] == 1.0
    b = ball_profile(scalar_D([0, 1, 3]), np.full(3, 1 / 3))
    assert b[0, 1] == pytest.approx(2 / 3)


@given(instances())
def test_ball_profile_bounds_and_monotone(inst):
    DX, _, w = inst
    b = ball_profile(DX, w)
    assert np.all(b <= 1 + 1e-12)
    assert np.all(b >= w[:, None] - 1e-12)
    for i in range(DX.shape[0]):
        order = np.argsort(DX[i], kind="stable")
        assert np.all(np.diff(b[i, order]) >= -1e-12)


def test_joint_profile_examples(rng):
    x = rng.normal(size=6)
    w = np.full(6, 1 / 6)
    DX = scalar_D(x)
    assert np.array_equal(joint_profile(DX, DX, w), ball_profile(DX, w))
    assert np.array_equal(joint_profile(DX, np.zeros((6, 6)), w), ball_profile(DX, w))
    assert joint_profile(scalar_D([0, 1]), scalar_D([0, 1]), HALF)[0, 0] == 0.5


@given(instances())
def test_joint_profile_frechet_bounds(inst):
    DX, DY, w = inst
    a = joint_profile(DX, DY, w)
    b, c = ball_profile(DX, w), ball_profile(DY, w)
    assert np.all(a <= np.minimum(b, c) + 1e-12)
    assert np.all(a >= np.maximum(0, b + c - 1) - 1e-12)


def test_size_mismatch():
    with pytest.raises(ValidationError):
        joint_profile(np.zeros((2, 2)), np.zeros((3, 3)), HALF)
    with pytest.raises(ValidationError):
        w_statistic(np.zeros((2, 2)), np.zeros((2, 2)), np.array([1.0, 1.0]))


# --- W statistic and its oracle -----------------------------------------------

def test_hand_fixture():
    D = scalar_D([0, 1])
    assert w_statistic(D, D, HALF) == 1 / 32
    assert w_statistic_bruteforce(D, D, HALF) == 1 / 32
    assert r_squared(D, D, HALF) == 1.0


def test_constant_response_gives_zero(rng):
    DX = scalar_D(rng.normal(size=5))
    w = rng.dirichlet(np.ones(5))
    assert w_statistic(DX, np.zeros((5, 5)), w) == 0.0
    assert w_statistic_bruteforce(DX, np.zeros((5, 5)), w) == 0.0
    assert r_squared(DX, np.zeros((5, 5)), w) == 0.0


def test_random_n6_matches_oracle(rng):
    DX = pairwise_distances(rng.normal(size=(6, 2)), "euclidean")
    DY = pairwise_distances(rng.uniform(0, 6, size=6), "circle")
    w = rng.dirichlet(np.ones(6))
    assert abs(w_statistic(DX, DY, w) - w_statistic_bruteforce(DX, DY, w)) <= 1e-10


@settings(max_examples=100)
@given(instances())
def test_factorization_matches_oracle(inst):
    DX, DY, w = inst
    assert abs(w_statistic(DX, DY, w) - w_statistic_bruteforce(DX, DY, w)) <= 1e-10


def test_oracle_guard():
    with pytest.raises(ValidationError):
        w_statistic_bruteforce(np.zeros((13, 13)), np.zeros((13, 13)), np.full(13, 1 / 13))


def test_unnormalized_weights_rejected():
    D = scalar_D([0, 1, 2])
    with pytest.raises(ValidationError):
        w_statistic(D, D, np.array([0.5, 0.5, 0.5]))


def test_exact_and_weighted_paths_agree(rng):
    for n in (5, 20, 40):
        DX = scalar_D(rng.integers(0, 4, n).astype(float))
        DY = scalar_D(rng.normal(size=n))
        w = np.full(n, 1.0 / n)
        exact = point_statistics(DX, DY, w)
        approx = _window_weighted(DX, DY, np.arange(n), w)
        assert np.allclose(exact, approx, rtol=1e-12, atol=1e-15)


@given(instances())
def test_nonnegative_and_symmetric(inst):
    DX, DY, w = inst
    assert w_statistic(DX, DY, w) >= 0
    assert w_statistic(DX, DY, w) == w_statistic(DY, DX, w)
    assert 0.0 <= r_squared(DX, DY, w) <= 1.0


def test_single_atom_weights(rng):
    DX = scalar_D(rng.normal(size=5))
    DY = scalar_D(rng.normal(size=5))
    w = np.zeros(5)
    w[2] = 1.0
    b = ball_profile(DX, w)
    assert set(np.unique(b)) <= {0.0, 1.0}
    assert w_statistic(DX, DY, w) == 0.0
    assert r_squared(DX, DY, w) == 0.0


def test_r_squared_independent_below_deterministic(rng):
    n = 200
    w = np.full(n, 1.0 / n)
    x = rng.normal(size=n)
    DX = scalar_D(x)
    r_ind = r_squared(DX, scalar_D(rng.normal(size=n)), w)
    r_det = r_squared(DX, scalar_D(x ** 3), w)
    assert 0 < r_ind < r_det
    assert r_ind < 0.05


# --- tau hat --------------------------------------------------------------------

def test_tau_identical_variables_is_one(rng):
    x = rng.normal(size=60)
    D = scalar_D(x)
    res = tau_hat(D, D, rng.normal(size=60))
    assert np.all(res.w_xx > 0)
    assert res.tau_hat == 1.0


def test_tau_constant_response_is_zero(rng):
    res = tau_hat(scalar_D(rng.normal(size=40)), np.zeros((40, 40)), rng.normal(size=40))
    assert res.tau_hat == 0.0
    assert np.all(res.r2 == 0.0)


def test_tau_matches_pointwise_definition(rng):
    n = 30
    z = rng.normal(size=n)
    DX = scalar_D(rng.normal(size=n))
    DY = pairwise_distances(rng.normal(size=(n, 3)), "sphere")
    res = tau_hat(DX, DY, z, h=0.4, standardize=False)
    r2 = [r_squared(DX, DY, kernel_weights(z, u, 0.4).weights) for u in range(n)]
    assert res.tau_hat == pytest.approx(np.mean(r2), abs=1e-14)
    assert np.allclose(res.r2, r2, atol=1e-14)
    assert res.tau_hat == pytest.approx(np.mean(res.r2), abs=1e-15)


def test_identical_z_reduces_to_unconditional(rng):
    n = 7
    DX = scalar_D(rng.integers(0, 3, n).astype(float))
    DY = scalar_D(rng.normal(size=n))
    res = tau_hat(DX, DY, np.zeros(n))
    w = np.full(n, 1.0 / n)
    assert np.all(res.window_sizes == n)
    assert res.w_xy[0] == pytest.approx(w_statistic_bruteforce(DX, DY, w), abs=1e-14)
    assert np.all(res.r2 == res.r2[0])


@given(instances(min_n=4, max_n=12), st.integers(0, 2 ** 32 - 1))
def test_tau_bounds(inst, seed):
    DX, DY, _ = inst
    z = np.random.default_rng(seed).normal(size=DX.shape[0])
    res = tau_hat(DX, DY, z)
    assert 0.0 <= res.tau_hat <= 1.0
    assert np.all((res.r2 >= 0) & (res.r2 <= 1))
    assert np.all(res.w_xy >= 0)


@given(instances(min_n=4, max_n=12), st.integers(0, 2 ** 32 - 1))
def test_tau_permutation_invariant(inst, seed):
    DX, DY, _ = inst
    r = np.random.default_rng(seed)
    z = r.normal(size=DX.shape[0])
    perm = r.permutation(DX.shape[0])
    a = tau_hat(DX, DY, z)
    b = tau_hat(DX[np.ix_(perm, perm)], DY[np.ix_(perm, perm)], z[perm])
    assert a.tau_hat == b.tau_hat
    assert np.array_equal(a.r2[perm], b.r2)


def test_active_beats_inactive_model_1b():
    wins = 0
    for seed in range(100):
        ds = gen_functional("1b", n=150, p=20, rho=0.0, seed=seed)
        DY = pairwise_distances(ds.response, ds.metric)
        t1 = tau_hat(scalar_D(ds.X[:, 0]), DY, ds.Z).tau_hat
        t20 = tau_hat(scalar_D(ds.X[:, 19]), DY, ds.Z).tau_hat
        wins += t1 > t20
    assert wins >= 95
