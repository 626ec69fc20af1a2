import numpy as np
import pytest

from cpmts.covariance import lag_covariance
from cpmts.exceptions import AllZeroSpectrum, LagTooLarge
from cpmts.proxy import pca_proxy
from cpmts.rank import (
    eigenvalue_ratio_rank,
    lag_product_matrices,
    preferred_rank_source,
)
from cpmts.simulation import DGPConfig, generate_cp_series, replication_rng


def test_ratio_rank_enumerated_example():
    diag = eigenvalue_ratio_rank(np.array([9.0, 3.0, 0.01, 0.009]), search_frac=0.8)
    np.testing.assert_allclose(diag.ratios, [1.0 / 3.0, 1.0 / 300.0, 0.9])
    assert diag.order == 2
    assert diag.search_bound == 3


def test_ratio_rank_tie_break():
    diag = eigenvalue_ratio_rank(np.array([2.0, 2.0, 2.0, 2.0]), search_frac=0.8)
    assert diag.order == 1


def test_ratio_rank_ridge_example():
    diag = eigenvalue_ratio_rank(
        np.array([5.0, 0.0, 0.0, 0.0]), ridge=0.01, search_frac=0.8
    )
    np.testing.assert_allclose(diag.ratios, [0.01 / 5.01, 1.0, 1.0])
    assert diag.order == 1


def test_ratio_rank_zero_over_zero_skipped():
    diag = eigenvalue_ratio_rank(np.array([5.0, 1.0, 0.0, 0.0]), search_frac=0.9)
    assert diag.ratios[1] == 0.0  # 0 / 1 at the cutoff
    assert np.isinf(diag.ratios[2])  # 0 / 0 skipped
    assert diag.order == 2


def test_ratio_rank_all_zero_spectrum():
    with pytest.raises(AllZeroSpectrum):
        eigenvalue_ratio_rank(np.zeros((4, 4)))
    # a ridge rescues the degenerate case
    assert eigenvalue_ratio_rank(np.zeros((4, 4)), ridge=0.1).order == 1


def test_ratio_rank_scale_invariant(rng):
    m = rng.standard_normal((8, 8))
    m = m @ m.T
    a = eigenvalue_ratio_rank(m)
    b = eigenvalue_ratio_rank(37.0 * m)
    assert a.order == b.order


def test_ratio_rank_forces_bound_to_one():
    with pytest.warns(UserWarning):
        diag = eigenvalue_ratio_rank(np.array([4.0, 1.0]), search_frac=0.4)
    assert diag.search_bound == 1
    assert diag.order == 1


def test_ratio_rank_respects_dim_bound():
    eigs = np.array([9.0, 8.5, 8.0, 0.004, 0.0039, 0.0038, 0.0001, 0.00001])
    # with the full dimension the search would run deep; a tighter series
    # bound keeps it to floor(0.5 * 4) = 2
    diag = eigenvalue_ratio_rank(eigs, dim_bound=4)
    assert diag.search_bound == 2


def test_lag_products_shapes_and_psd(rng):
    values = rng.standard_normal((20, 3, 2))
    xi = rng.standard_normal(20)
    m1, m2 = lag_product_matrices(values, xi, 3)
    assert m1.shape == (3, 3) and m2.shape == (2, 2)
    np.testing.assert_allclose(m1, m1.T, atol=1e-12)
    np.testing.assert_allclose(m2, m2.T, atol=1e-12)
    assert np.linalg.eigvalsh(m1).min() >= -1e-12
    assert np.linalg.eigvalsh(m2).min() >= -1e-12


def test_lag_products_single_lag_spectra_match(rng):
    # with one lag the nonzero spectra of both products coincide: they are
    # the squared singular values of the lag-1 covariance
    values = rng.standard_normal((40, 5, 3))
    xi = rng.standard_normal(40)
    m1, m2 = lag_product_matrices(values, xi, 1)
    svals = np.linalg.svd(lag_covariance(values, xi, 1).matrix, compute_uv=False)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(m2)[::-1], svals**2, atol=1e-12
    )
    np.testing.assert_allclose(
        np.sort(np.linalg.eigvalsh(m1))[::-1][:3], svals**2, atol=1e-12
    )


def test_lag_products_constant_series(rng):
    m1, m2 = lag_product_matrices(np.ones((15, 2, 2)), rng.standard_normal(15), 2)
    np.testing.assert_allclose(m1, 0.0, atol=1e-14)
    np.testing.assert_allclose(m2, 0.0, atol=1e-14)


def test_lag_products_lag_bound(rng):
    values = rng.standard_normal((10, 2, 2))
    with pytest.raises(LagTooLarge):
        lag_product_matrices(values, rng.standard_normal(10), 9)


def test_preferred_source_rule():
    assert preferred_rank_source(8, 8) == "M1"
    assert preferred_rank_source(4, 32) == "M2"
    assert preferred_rank_source(32, 4) == "M1"


def test_noise_free_rank_recovery_rate():
    # noise-off process, (p,q,d,n) = (16,16,3,900): the ratio rule on the
    # accumulated products must find the true order in >= 99% of 200 runs
    hits = 0
    for rep in range(200):
        rng = replication_rng(5, 0, rep)
        values, _ = generate_cp_series(
            DGPConfig(16, 16, 3, 900, seed=rng, noise=False)
        )
        xi = pca_proxy(values)
        m1, _ = lag_product_matrices(values, xi.values, 3)
        hits += eigenvalue_ratio_rank(m1, dim_bound=16).order == 3
    assert hits >= 198
