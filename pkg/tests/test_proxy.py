import numpy as np
import pytest

from cpmts.exceptions import DegenerateCovariance
from cpmts.proxy import make_proxy, pca_proxy, random_proxy


def _rank_one_series(rng, p=4, q=3, n=60):
    a = rng.standard_normal(p)
    b = rng.standard_normal(q)
    x = rng.standard_normal(n)
    return np.einsum("t,i,j->tij", x, a, b), x


def test_pca_rank_one_tracks_factor(rng):
    values, x = _rank_one_series(rng)
    proxy = pca_proxy(values)
    assert proxy.n_components == 1
    corr = np.corrcoef(proxy.values, x)[0, 1]
    assert abs(corr) == pytest.approx(1.0, abs=1e-10)


def test_pca_component_count_rule():
    # two orthogonal directions whose sample variances split 0.995 / 0.005
    n = 9
    u1 = np.zeros(6)
    u1[0] = 1.0
    u2 = np.zeros(6)
    u2[3] = 1.0
    z1 = np.array([1.0, -1.0, 2.0, -2.0, 0.5, -0.5, 0.0, 0.0, 0.0])
    z2 = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0])
    z1 -= z1.mean()
    z2 -= z2.mean()
    z1 *= np.sqrt(0.995) / np.linalg.norm(z1)
    z2 *= np.sqrt(0.005) / np.linalg.norm(z2)
    flat = np.outer(z1, u1) + np.outer(z2, u2)
    values = flat.reshape(n, 3, 2).transpose(0, 2, 1)  # undo column stacking
    proxy = pca_proxy(values)
    assert proxy.n_components == 1
    np.testing.assert_allclose(np.abs(proxy.weight), u1, atol=1e-12)


def test_pca_constant_series_degenerate():
    with pytest.raises(DegenerateCovariance):
        pca_proxy(np.ones((5, 2, 2)))


def test_pca_invariant_under_cell_relabeling(rng):
    values = rng.standard_normal((40, 3, 4))
    perm = rng.permutation(12)
    flat = values.transpose(0, 2, 1).reshape(40, 12)
    relabeled = flat[:, perm].reshape(40, 4, 3).transpose(0, 2, 1)
    a = pca_proxy(values)
    b = pca_proxy(relabeled)
    np.testing.assert_allclose(a.values, b.values, atol=1e-10)


def test_pca_weight_unit_norm(rng):
    values = rng.standard_normal((30, 4, 4))
    proxy = pca_proxy(values)
    assert np.linalg.norm(proxy.weight) == pytest.approx(1.0, abs=1e-12)


def test_random_proxy_deterministic(rng):
    values = rng.standard_normal((20, 3, 3))
    a = random_proxy(values, 99)
    b = random_proxy(values, 99)
    np.testing.assert_array_equal(a.values, b.values)
    np.testing.assert_array_equal(a.weight, b.weight)
    assert np.linalg.norm(a.weight) == pytest.approx(1.0, abs=1e-12)


def test_random_proxy_scalar_case():
    values = np.full((5, 1, 1), 3.0)
    proxy = random_proxy(values, 0)
    assert proxy.weight.shape == (1,)
    np.testing.assert_allclose(proxy.values, proxy.weight[0] * 3.0)


def test_random_proxy_linear_in_scale(rng):
    values = rng.standard_normal((25, 2, 3))
    a = random_proxy(values, 7)
    b = random_proxy(2.5 * values, 7)
    np.testing.assert_allclose(b.values, 2.5 * a.values, atol=1e-12)


def test_make_proxy_dispatch(rng):
    values = rng.standard_normal((20, 2, 2))
    assert make_proxy(values, "pca").strategy == "pca"
    assert make_proxy(values, "random", 1).strategy == "random"
    with pytest.raises(ValueError):
        make_proxy(values, "nope")


def test_projected_series_proxy(rng):
    # the same machinery serves the d x d projected series
    z = rng.standard_normal((30, 2, 2))
    proxy = make_proxy(z, "pca")
    assert proxy.weight.shape == (4,)
