"""Univariate AR modelling of the realified factors and matrix forecasts.

Each realified factor series gets its own AR model, with the order picked by
AIC over ``0..max_order``.  Fits use conditional least squares on the common
sample (the first ``max_order`` points are dropped for every candidate
order, so the AIC values are comparable).  Multi-step forecasts plug
predictions back into the recursion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposition import CPDecomposition
from .exceptions import TooShort, ZeroVariance
from .factors import realify, recombine


@dataclass(frozen=True)
class ARModel:
    """A fitted autoregression ``x_t = c + phi_1 x_{t-1} + ... + e_t``."""

    order: int
    intercept: float
    coefficients: np.ndarray  # (order,), coefficients[j] multiplies x_{t-1-j}
    innovation_variance: float
    aic: float


@dataclass(frozen=True)
class ForecastResult:
    """Matrix forecasts plus the univariate models that produced them."""

    matrices: np.ndarray  # (steps, p, q) real
    factor_forecasts: np.ndarray  # (steps, n_realified) real
    models: tuple[ARModel, ...]


def _cls_fit(x: np.ndarray, order: int, max_order: int) -> ARModel:
    targets = x[max_order:]
    t_eff = targets.shape[0]
    design = np.ones((t_eff, order + 1))
    for j in range(order):
        design[:, j + 1] = x[max_order - 1 - j : len(x) - 1 - j]
    coef, *_ = np.linalg.lstsq(design, targets, rcond=None)
    resid = targets - design @ coef
    variance = float(resid @ resid) / t_eff
    aic = t_eff * np.log(max(variance, np.finfo(float).tiny)) + 2 * (order + 1)
    return ARModel(
        order=order,
        intercept=float(coef[0]),
        coefficients=coef[1:],
        innovation_variance=variance,
        aic=float(aic),
    )


def fit_ar_aic(x, max_order: int = 5) -> ARModel:
    """Fit AR models of order ``0..max_order`` and return the AIC argmin.

    AIC convention: ``T log(sigma2) + 2 (order + 1)`` with ``T`` the common
    effective sample size ``len(x) - max_order``.  Ties resolve to the
    smaller order.

    Raises
    ------
    TooShort
        If ``len(x) <= max_order + 2``.
    ZeroVariance
        If the series is constant.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a univariate series")
    if len(x) <= max_order + 2:
        raise TooShort(f"series of length {len(x)} too short for max order {max_order}")
    if np.ptp(x) == 0:
        raise ZeroVariance("cannot fit an AR model to a constant series")

    fits = [_cls_fit(x, order, max_order) for order in range(max_order + 1)]
    return fits[int(np.argmin([f.aic for f in fits]))]


def ar_forecast(model: ARModel, history, steps: int) -> np.ndarray:
    """Recursive ``steps``-ahead point forecasts from the end of ``history``."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    buffer = list(np.asarray(history, dtype=float)[len(history) - model.order :])
    out = np.empty(steps)
    for h in range(steps):
        value = model.intercept
        for j in range(model.order):
            value += model.coefficients[j] * buffer[-1 - j]
        out[h] = value
        buffer.append(value)
    return out


def forecast_matrices(
    decomposition: CPDecomposition, steps: int, max_ar_order: int = 5
) -> ForecastResult:
    """Forecast the matrix series ``steps`` ahead through the factor models.

    Realifies the factor series, fits one AR(AIC) model per real series,
    forecasts each recursively, recombines conjugate pairs, and rebuilds the
    matrices from the rank-one components.  The imaginary residual of the
    recombination is checked against 1e-8 (relative) and discarded.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    realified = realify(decomposition)
    models = tuple(
        fit_ar_aic(realified.series[:, i], max_ar_order)
        for i in range(realified.series.shape[1])
    )
    paths = np.column_stack(
        [
            ar_forecast(models[i], realified.series[:, i], steps)
            for i in range(len(models))
        ]
    )
    complex_factors = recombine(paths, realified.components, decomposition.order)
    matrices = decomposition.reconstruct(complex_factors)
    return ForecastResult(matrices=matrices, factor_forecasts=paths, models=models)
