"""Componentwise standardization and missing-value imputation."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import InsufficientHistory, ZeroVariance
from .series import MatrixSeries, SeriesMask
from .validation import check_same_shape, check_series_values

# Weights on the three previous observations used to fill a missing entry.
IMPUTE_WEIGHTS = (0.5, 0.3, 0.2)


def standardize(series):
    """Center and scale every component series to mean zero, variance one.

    Variances use the population divisor ``n``; the returned means and
    standard deviations invert the transform exactly.

    Parameters
    ----------
    series : MatrixSeries or (n, p, q) array_like

    Returns
    -------
    standardized : MatrixSeries
    means : (p, q) ndarray
    sds : (p, q) ndarray

    Raises
    ------
    ZeroVariance
        If some component series ``y[., i, j]`` is constant.
    """
    values = check_series_values(series)
    means = values.mean(axis=0)
    sds = values.std(axis=0)
    flat = np.argwhere(sds == 0)
    if flat.size:
        i, j = flat[0]
        raise ZeroVariance(f"component series ({i + 1}, {j + 1}) is constant")
    return MatrixSeries((values - means) / sds), means, sds


def destandardize(series, means, sds):
    """Invert :func:`standardize` with the affine parameters it returned."""
    values = check_series_values(series)
    return MatrixSeries(values * np.asarray(sds) + np.asarray(means))


def impute_missing(series, mask):
    """Fill masked entries with a weighted average of the three predecessors.

    Entries are filled in increasing ``t`` so newly imputed values can feed
    later imputations; only masked entries change.

    Raises
    ------
    InsufficientHistory
        If a masked entry sits at one of the first three time points.
    """
    values = check_series_values(series).copy()
    flags = mask.values if isinstance(mask, SeriesMask) else np.asarray(mask, bool)
    check_same_shape(values, flags)

    w1, w2, w3 = IMPUTE_WEIGHTS
    for t in range(values.shape[0]):
        if not flags[t].any():
            continue
        if t < 3:
            raise InsufficientHistory(
                f"masked entry at t={t + 1} has fewer than three predecessors"
            )
        hit = flags[t]
        values[t][hit] = (
            w1 * values[t - 1][hit] + w2 * values[t - 2][hit] + w3 * values[t - 3][hit]
        )
    return MatrixSeries(values)


class MatrixStandardizer(BaseEstimator, TransformerMixin):
    """Transformer wrapper around :func:`standardize` for pipeline use.

    ``fit`` learns per-component means and standard deviations,
    ``transform``/``inverse_transform`` apply and undo the affine map.
    """

    def fit(self, X, y=None):
        _, self.means_, self.sds_ = standardize(X)
        return self

    def transform(self, X):
        values = check_series_values(X)
        return (values - self.means_) / self.sds_

    def inverse_transform(self, X):
        values = check_series_values(X)
        return values * self.sds_ + self.means_
