import numpy as np
import pytest

from cpmts._linalg import vec_all
from cpmts.covariance import (
    hard_threshold,
    lag_covariance,
    projected_lag_covariance,
    streamed_projected_lag_covariance,
)
from cpmts.exceptions import LagTooLarge, NonOrthonormalProjection


def test_lag_covariance_hand_case():
    values = np.array([1.0, 2.0, 3.0]).reshape(3, 1, 1)
    xi = np.array([1.0, 0.0, 1.0])
    cov = lag_covariance(values, xi, 1)
    # Ybar=2, xibar=2/3; ((2-2)(1-2/3) + (3-2)(0-2/3)) / 2 = -1/3
    assert cov.matrix[0, 0] == pytest.approx(-1.0 / 3.0)
    assert cov.lag == 1


def test_lag_covariance_constant_inputs(rng):
    values = np.ones((10, 2, 3))
    xi = rng.standard_normal(10)
    np.testing.assert_allclose(lag_covariance(values, xi, 1).matrix, 0.0, atol=1e-14)
    values = rng.standard_normal((10, 2, 3))
    np.testing.assert_allclose(
        lag_covariance(values, np.ones(10), 2).matrix, 0.0, atol=1e-14
    )


def test_lag_covariance_lag_bounds(rng):
    values = rng.standard_normal((10, 2, 2))
    xi = rng.standard_normal(10)
    with pytest.raises(LagTooLarge):
        lag_covariance(values, xi, 9)  # n - 1
    with pytest.raises(LagTooLarge):
        lag_covariance(values, xi, 0)
    lag_covariance(values, xi, 8)  # n - 2 is fine


def test_lag_covariance_bilinear(rng):
    values = rng.standard_normal((30, 3, 2))
    xi = rng.standard_normal(30)
    base = lag_covariance(values, xi, 2).matrix
    np.testing.assert_allclose(
        lag_covariance(4.0 * values, xi, 2).matrix, 4.0 * base, atol=1e-12
    )
    np.testing.assert_allclose(
        lag_covariance(values, -0.5 * xi, 2).matrix, -0.5 * base, atol=1e-12
    )


def test_hard_threshold_cases():
    m = np.array([[0.3, -0.1], [0.05, 0.7]])
    np.testing.assert_array_equal(hard_threshold(m, 0.0), m)
    np.testing.assert_array_equal(
        hard_threshold(m, 0.2), np.array([[0.3, 0.0], [0.0, 0.7]])
    )
    np.testing.assert_array_equal(hard_threshold(m, 1.0), np.zeros((2, 2)))
    # keep-if-at-least: the boundary entry survives
    np.testing.assert_array_equal(hard_threshold(m, 0.3)[0, 0], 0.3)


def test_hard_threshold_idempotent(rng):
    m = rng.standard_normal((4, 5))
    once = hard_threshold(m, 0.4)
    np.testing.assert_array_equal(hard_threshold(once, 0.4), once)


def _orthonormal(rng, dim, k):
    q, _ = np.linalg.qr(rng.standard_normal((dim, k)))
    return q


def test_projected_cov_paths_agree(rng):
    # random 4 x 3 x 50 series, level 0
    values = rng.standard_normal((50, 4, 3))
    row = _orthonormal(rng, 4, 2)
    col = _orthonormal(rng, 3, 2)
    w = rng.standard_normal(4)
    w /= np.linalg.norm(w)
    fast = projected_lag_covariance(values, row, col, w, 1, 0.0)
    slow = streamed_projected_lag_covariance(values, row, col, w, 1, 0.0)
    assert np.abs(fast - slow).max() <= 1e-10 * max(1.0, np.abs(fast).max())


def test_projected_cov_constant_series(rng):
    values = np.ones((20, 3, 3))
    row = _orthonormal(rng, 3, 1)
    col = _orthonormal(rng, 3, 1)
    out = projected_lag_covariance(values, row, col, np.ones(1), 1, 0.0)
    np.testing.assert_allclose(out, 0.0, atol=1e-14)


def test_projected_cov_huge_threshold(rng):
    values = rng.standard_normal((30, 3, 3))
    row = _orthonormal(rng, 3, 2)
    col = _orthonormal(rng, 3, 2)
    w = np.ones(4) / 2.0
    out = projected_lag_covariance(values, row, col, w, 1, 1e9)
    np.testing.assert_array_equal(out, np.zeros((2, 2)))


def test_projected_cov_rejects_bad_basis(rng):
    values = rng.standard_normal((20, 3, 3))
    bad = rng.standard_normal((3, 2))
    good = _orthonormal(rng, 3, 2)
    with pytest.raises(NonOrthonormalProjection):
        projected_lag_covariance(values, bad, good, np.ones(4), 1)


def test_streamed_matches_dense_kronecker_oracle(rng):
    # independent oracle: build the full (p^2 q) x q lagged covariance,
    # threshold it, and project, exactly as defined
    p, q, d, n, lag, level = 3, 2, 2, 40, 2, 0.02
    values = rng.standard_normal((n, p, q))
    row = _orthonormal(rng, p, d)
    col = _orthonormal(rng, q, d)
    w = rng.standard_normal(d * d)

    centered = values - values.mean(axis=0)
    dense = np.zeros((p * p * q, q))
    for t in range(lag, n):
        dense += np.kron(centered[t], vec_all(centered[t - lag : t - lag + 1]).T)
    dense /= n - lag
    dense = np.where(np.abs(dense) >= level, dense, 0.0)
    theta = np.kron(np.eye(p), (np.kron(col, row) @ w)[:, None])
    expected = row.T @ (theta.T @ dense) @ col

    got = streamed_projected_lag_covariance(values, row, col, w, lag, level)
    np.testing.assert_allclose(got, expected, atol=1e-12)
    also = projected_lag_covariance(values, row, col, w, lag, level)
    np.testing.assert_allclose(also, expected, atol=1e-12)
