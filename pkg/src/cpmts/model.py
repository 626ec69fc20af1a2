"""Scikit-learn style front end for the two estimation methods."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._linalg import as_generator, pinv_rcond, vec_all
from .decomposition import component_basis
from .direct import direct_estimate
from .forecast import ForecastResult, forecast_matrices
from .proxy import make_proxy
from .refined import refined_estimate
from .validation import check_series_values


class CPFactorModel(BaseEstimator):
    """Latent factor model for matrix time series via CP structure.

    Fits ``Y_t = sum_l x[t, l] a_l b_l' + noise`` in a single pass from the
    serial dependence of the series; no iterative refinement is involved.

    Parameters
    ----------
    method : {"refined", "direct"}
        The projected ("refined") estimator is the default; it solves a
        small full-rank eigenproblem and dominates the direct pencil
        estimator in finite samples.
    n_lags : int
        Lags accumulated for order selection and projection (refined method
        only; the direct method always works from lags 1 and 2).
    proxy : {"pca", "random"}
        Scalar proxy construction.
    threshold : float
        Hard-threshold level for raw lag covariances; keep 0 unless
        ``p * q`` is large relative to ``n``.
    proj_threshold : float
        Threshold level inside the projected covariance estimator
        (refined method only).
    ridge : float
        Constant added to both sides of the order-selection ratios.
    search_frac : float
        The order search runs up to ``floor(search_frac * min(p, q))``.
    random_state : int, Generator or None
        Seeds the random proxy; unused for the PCA proxy.

    Attributes
    ----------
    decomposition_ : CPDecomposition
    order_ : int
    row_loadings_, col_loadings_ : complex ndarray
    factors_ : (n, order) complex ndarray
    eigenvalues_ : (order,) complex ndarray
    rank_diagnostics_ : RankDiagnostics

    Examples
    --------
    >>> model = CPFactorModel(n_lags=3).fit(Y)          # doctest: +SKIP
    >>> model.order_                                     # doctest: +SKIP
    3
    >>> model.forecast(2).matrices.shape                 # doctest: +SKIP
    (2, 10, 10)
    """

    def __init__(
        self,
        method: str = "refined",
        n_lags: int = 3,
        proxy: str = "pca",
        threshold: float = 0.0,
        proj_threshold: float = 0.0,
        ridge: float = 0.0,
        search_frac: float = 0.5,
        random_state=None,
    ):
        self.method = method
        self.n_lags = n_lags
        self.proxy = proxy
        self.threshold = threshold
        self.proj_threshold = proj_threshold
        self.ridge = ridge
        self.search_frac = search_frac
        self.random_state = random_state

    def fit(self, X, y=None):
        """Estimate order, loadings and factors from an ``(n, p, q)`` series."""
        values = check_series_values(X)
        seed = self.random_state
        if self.method == "refined":
            est = refined_estimate(
                values,
                proxy_strategy=self.proxy,
                n_lags=self.n_lags,
                level=self.threshold,
                proj_level=self.proj_threshold,
                ridge=self.ridge,
                search_frac=self.search_frac,
                seed=seed,
            )
        elif self.method == "direct":
            xi = make_proxy(values, self.proxy, as_generator(seed))
            est = direct_estimate(
                values,
                xi,
                level=self.threshold,
                ridge=self.ridge,
                search_frac=self.search_frac,
                seed=seed,
            )
        else:
            raise ValueError(f"unknown method {self.method!r}")

        self.decomposition_ = est
        self.order_ = est.order
        self.row_loadings_ = est.row_loadings
        self.col_loadings_ = est.col_loadings
        self.factors_ = est.factors
        self.eigenvalues_ = est.eigenvalues
        self.rank_diagnostics_ = est.diagnostics
        return self

    def transform(self, X) -> np.ndarray:
        """Project matrices onto the fitted components; returns ``(m, order)``."""
        check_is_fitted(self, "decomposition_")
        values = check_series_values(X, min_length=1)
        basis = component_basis(self.row_loadings_, self.col_loadings_)
        pinv = np.linalg.pinv(basis, rcond=pinv_rcond(basis.shape))
        return vec_all(values) @ pinv.T

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).factors_

    def inverse_transform(self, factors) -> np.ndarray:
        """Rebuild real matrices from factor rows."""
        check_is_fitted(self, "decomposition_")
        return self.decomposition_.reconstruct(np.atleast_2d(factors))

    def reconstruct(self) -> np.ndarray:
        """Fitted values ``sum_l x[t, l] a_l b_l'`` for the training series."""
        check_is_fitted(self, "decomposition_")
        return self.decomposition_.reconstruct()

    def forecast(self, steps: int, max_ar_order: int = 5) -> ForecastResult:
        """Model each realified factor series by an AR(AIC) fit and forecast.

        See :func:`cpmts.forecast.forecast_matrices`.
        """
        check_is_fitted(self, "decomposition_")
        return forecast_matrices(self.decomposition_, steps, max_ar_order)
