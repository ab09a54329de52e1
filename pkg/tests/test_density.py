import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from comecsis.density import (ConditioningSample, bandwidth, kernel_weights, window_mask,
                              windows)
from comecsis.errors import ValidationError


@pytest.mark.parametrize("n, d_z, expected", [
    (150, 1, 150 ** (-1 / 6)), (64, 1, 0.5), (150, 2, 150 ** (-1 / 12)),
])
def test_bandwidth(n, d_z, expected):
    assert bandwidth(n, d_z) == pytest.approx(expected, rel=1e-14)


def test_bandwidth_reference_digits():
    assert round(bandwidth(150, 1), 5) == 0.43383
    assert round(bandwidth(150, 2), 5) == 0.65866
    with pytest.raises(ValidationError):
        bandwidth(1, 1)


def test_kernel_weights_examples():
    w = kernel_weights([0.0, 0.3, 1.0], 0, 0.5)
    assert np.array_equal(w.weights, [0.5, 0.5, 0.0])
    w = kernel_weights([0.0, 10.0, 20.0], 0, 0.5)
    assert np.array_equal(w.weights, [1.0, 0.0, 0.0])
    w = kernel_weights(np.full(5, 2.5), 3, 0.01)
    assert np.allclose(w.weights, 0.2)
    with pytest.raises(ValidationError):
        kernel_weights([0.0, 1.0], 2, 0.5)


def test_multivariate_window_uses_sup_norm():
    Z = np.array([[0.0, 0.0], [0.4, 0.4], [0.4, 0.6], [0.0, -0.5]])
    assert np.array_equal(window_mask(Z, 0, 0.5), [True, True, False, True])


def test_standardization():
    Z = ConditioningSample(np.column_stack([np.arange(10.0), 100 * np.arange(10.0), np.ones(10)]))
    S = Z.standardized().values
    assert np.allclose(S[:, :2].mean(axis=0), 0)
    assert np.allclose(S[:, :2].std(axis=0, ddof=1), 1)
    assert np.allclose(S[:, 0], S[:, 1], atol=1e-14)
    assert np.all(S[:, 2] == 0)


@given(arrays(np.float64, st.integers(2, 30), elements=st.floats(-10, 10)),
       st.floats(0.01, 5), st.data())
def test_weights_form_probability_vector(z, h, data):
    u = data.draw(st.integers(0, z.size - 1))
    w = kernel_weights(z, u, h)
    assert np.all(w.weights >= 0)
    assert abs(w.weights.sum() - 1.0) <= 1e-12
    assert w.weights[u] > 0


@given(arrays(np.float64, st.integers(2, 30), elements=st.floats(-10, 10)),
       st.floats(0.01, 5), st.floats(1.0, 3.0), st.data())
def test_support_monotone_in_bandwidth(z, h, factor, data):
    u = data.draw(st.integers(0, z.size - 1))
    small = kernel_weights(z, u, h).weights > 0
    large = kernel_weights(z, u, h * factor).weights > 0
    assert np.all(large[small])


def test_windows_match_kernel_weights(rng):
    Z = rng.normal(size=(40, 2))
    for u, idx in enumerate(windows(Z, 0.7)):
        assert np.array_equal(idx, kernel_weights(Z, u, 0.7).support)
