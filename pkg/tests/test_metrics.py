import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from comecsis.core import tau_hat
from comecsis.errors import DistanceMatrixError, ValidationError
from comecsis.metrics import (MetricKind, MetricSpec, circle_geodesic, euclidean_distance,
                              kendall_shape_distance, l2_grid_distance, pairwise_distances,
                              sphere_geodesic, validate_distance_matrix)


@pytest.mark.parametrize("a, b, expected", [
    ([0.0], [0.0], 0.0),
    ([0.0, 0.0], [3.0, 4.0], 5.0),
    ([1.0], [-1.0], 2.0),
])
def test_euclidean_distance(a, b, expected):
    assert euclidean_distance(a, b) == expected


def test_euclidean_errors():
    with pytest.raises(ValidationError):
        euclidean_distance([0.0, 1.0], [0.0])
    with pytest.raises(ValidationError):
        euclidean_distance([np.nan], [0.0])


def test_l2_grid_distance():
    f = np.linspace(0, 1, 17)
    assert l2_grid_distance(f, f) == 0.0
    assert l2_grid_distance(f + 1.0, f) == pytest.approx(math.sqrt(17), abs=1e-12)
    g = np.sin(np.arange(17.0))
    assert l2_grid_distance(3 * f, 3 * g) == pytest.approx(3 * l2_grid_distance(f, g))
    with pytest.raises(ValidationError):
        l2_grid_distance(f, f[:16])


@pytest.mark.parametrize("v, expected", [
    ((1, 0, 0), 0.0), ((0, 1, 0), math.pi / 2), ((-1, 0, 0), math.pi),
])
def test_sphere_geodesic(v, expected):
    assert sphere_geodesic((1, 0, 0), v) == pytest.approx(expected, abs=1e-15)


def test_sphere_geodesic_renormalizes_and_rejects_zero():
    assert sphere_geodesic((2, 0, 0), (0, 0, 5)) == pytest.approx(math.pi / 2)
    with pytest.raises(ValidationError):
        sphere_geodesic((0, 0, 0), (1, 0, 0))


def test_circle_geodesic():
    assert circle_geodesic(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2, abs=1e-12)
    assert circle_geodesic(0.0, math.pi) == pytest.approx(math.pi)
    assert circle_geodesic(1.3, 1.3) == 0.0
    assert circle_geodesic(-0.1, 0.1) == pytest.approx(0.2)
    with pytest.raises(ValidationError):
        circle_geodesic(float("inf"), 0.0)


def _rotate(c, angle):
    R = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    centroid = c.mean(axis=0)
    return (c - centroid) @ R.T + centroid


def test_kendall_shape_distance_invariances():
    c = np.array([[0.0, 0.0], [1.0, 0.2], [0.7, 1.5], [-0.3, 0.9]])
    assert kendall_shape_distance(c, c) == pytest.approx(0.0, abs=1e-7)
    assert kendall_shape_distance(c, _rotate(c, math.pi / 2)) == pytest.approx(0.0, abs=1e-7)
    assert kendall_shape_distance(c, 3 * c + [5.0, -2.0]) == pytest.approx(0.0, abs=1e-7)
    other = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 0.1], [0.5, 0.4]])
    d = kendall_shape_distance(c, other)
    assert 0 < d <= math.pi / 2


def test_kendall_shape_degenerate():
    with pytest.raises(ValidationError):
        kendall_shape_distance(np.ones((4, 2)), np.eye(4, 2))
    with pytest.raises(ValidationError):
        kendall_shape_distance(np.eye(2), np.eye(2))


def test_pairwise_examples():
    D = pairwise_distances([[1.0, 2.0], [1.0, 2.0]], "euclidean")
    assert np.array_equal(D, np.zeros((2, 2)))
    D = pairwise_distances(np.array([0.0, 1.0, 3.0]), "euclidean")
    assert D[0, 2] == 3.0 and D[1, 2] == 2.0


def test_precomputed_asymmetric_names_pair():
    D = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.5, 0.0]])
    with pytest.raises(DistanceMatrixError) as err:
        pairwise_distances(D, "precomputed")
    assert err.value.pair == (1, 2)
    assert "(1, 2)" in str(err.value)


@pytest.mark.parametrize("bad, pair", [
    (np.array([[0.0, -1.0], [-1.0, 0.0]]), (0, 1)),
    (np.array([[0.0, 1.0], [1.0, 0.5]]), (1, 1)),
    (np.array([[0.0, np.nan], [np.nan, 0.0]]), (0, 1)),
])
def test_validation_failures(bad, pair):
    with pytest.raises(DistanceMatrixError) as err:
        validate_distance_matrix(bad)
    assert err.value.pair == pair


def _assert_valid(D):
    assert np.array_equal(D, D.T)
    assert np.all(np.diag(D) == 0)
    assert np.all(D >= 0) and np.all(np.isfinite(D))


@pytest.mark.parametrize("kind, shape", [
    ("euclidean", (12,)), ("euclidean", (12, 3)), ("l2", (12, 17)), ("sphere", (12, 3)),
    ("circle", (12,)), ("shape", (12, 10)),
])
def test_every_path_produces_valid_matrix(rng, kind, shape):
    D = pairwise_distances(rng.normal(size=shape), kind)
    _assert_valid(D)


def test_sphere_and_shape_matrices_match_scalar_functions(rng):
    U = rng.normal(size=(6, 3))
    D = pairwise_distances(U, MetricSpec(MetricKind.SPHERE3))
    for i in range(6):
        for j in range(i + 1, 6):
            assert D[i, j] == pytest.approx(sphere_geodesic(U[i], U[j]), abs=1e-12)
    S = rng.normal(size=(5, 4, 2))
    D = pairwise_distances(S, "shape")
    for i in range(5):
        for j in range(i + 1, 5):
            assert D[i, j] == pytest.approx(kendall_shape_distance(S[i], S[j]), abs=1e-12)


def test_no_nan_on_nearly_identical_directions():
    u = np.array([[1.0, 0.0, 0.0], [1.0, 1e-9, 0.0], [1.0, 0.0, 0.0]])
    D = pairwise_distances(u, "sphere")
    assert np.all(np.isfinite(D))
    c = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert math.isfinite(kendall_shape_distance(c, c * (1 + 1e-15)))


@given(arrays(np.float64, (8,), elements=st.floats(-5, 5)),
       arrays(np.float64, (8,), elements=st.floats(-5, 5)),
       st.floats(0.01, 100))
def test_metric_scaling_leaves_tau_unchanged(x, y, c):
    z = np.linspace(0, 1, 8)
    DX = pairwise_distances(x, "euclidean")
    DY = pairwise_distances(y, "euclidean")
    a = tau_hat(DX, DY, z, h=0.5, standardize=False)
    b = tau_hat(c * DX, DY, z, h=0.5, standardize=False)
    # scaling is order preserving, so only a rounding-induced new tie could differ
    assume_no_new_ties = np.array_equal(DX[:, None, :] <= DX[:, :, None],
                                        (c * DX)[:, None, :] <= (c * DX)[:, :, None])
    if assume_no_new_ties:
        assert a.tau_hat == b.tau_hat
        assert np.array_equal(a.r2, b.r2)
