"""Estimation- and forecasting-accuracy metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import WindowTooLong
from .validation import check_same_shape, check_series_values


def loading_mismatch(truth, estimate) -> float:
    """Worst column match between true and estimated loading matrices.

    For every true column the best estimated column is found by the modulus
    of the conjugate inner product; the reported value is the worst such
    match, ``max_l min_j (1 - |<est_j, truth_l>|^2)``.  Lies in ``[0, 1]``;
    invariant to column permutation and to unit-modulus rescaling of any
    estimated column.  Columns are renormalized defensively.
    """
    truth = np.atleast_2d(np.asarray(truth))
    estimate = np.atleast_2d(np.asarray(estimate))
    if truth.ndim != 2 or estimate.ndim != 2 or truth.shape[0] != estimate.shape[0]:
        raise ValueError("loading matrices must share their first dimension")
    truth = truth / np.linalg.norm(truth, axis=0)
    estimate = estimate / np.linalg.norm(estimate, axis=0)
    overlap = np.abs(estimate.conj().T @ truth) ** 2  # (d_hat, d)
    mismatch = 1.0 - overlap.max(axis=0)
    return float(np.clip(mismatch.max(), 0.0, 1.0))


def fit_errors(actual, fitted) -> tuple[float, float]:
    """Entrywise RMSE and MAE over all ``n * p * q`` cells."""
    actual = check_series_values(actual, min_length=1)
    fitted = check_series_values(fitted, min_length=1)
    check_same_shape(actual, fitted)
    diff = fitted - actual
    return float(np.sqrt(np.mean(diff**2))), float(np.mean(np.abs(diff)))


@dataclass(frozen=True)
class RollingForecastResult:
    rrmse: float
    rmae: float
    forecasts: np.ndarray  # (n_windows, p, q)
    targets: np.ndarray  # (n_windows, p, q)


def rolling_forecast_eval(
    series, forecaster, n_windows: int, horizon: int = 1
) -> RollingForecastResult:
    """Rolling out-of-sample evaluation over the last ``n_windows`` points.

    For window ``s = 1..n_windows`` the forecaster is refit on
    ``Y_s, ..., Y_{n - n_windows + s - horizon}`` and its ``horizon``-step
    forecast is scored against the held-out ``Y_{n - n_windows + s}``; all
    training windows share one length.  Aggregation divides the accumulated
    errors by ``n_windows * p * q``.

    Parameters
    ----------
    series : MatrixSeries or (n, p, q) array_like
    forecaster : callable ``(train_values, horizon) -> (horizon, p, q)``
        Refit from scratch on every window; only the ``horizon``-th step of
        its output is scored.
    n_windows : int
    horizon : int

    Raises
    ------
    WindowTooLong
        If the common training length drops below 3 observations.
    """
    values = check_series_values(series)
    n = values.shape[0]
    if n_windows < 1 or horizon < 1:
        raise ValueError("n_windows and horizon must be positive")
    train_len = n - n_windows - horizon + 1
    if train_len < 3:
        raise WindowTooLong(
            f"{n_windows} windows at horizon {horizon} leave {train_len} "
            f"training points from n={n}"
        )

    forecasts = np.empty((n_windows, values.shape[1], values.shape[2]))
    targets = np.empty_like(forecasts)
    for s in range(n_windows):
        train = values[s : s + train_len]
        path = np.asarray(forecaster(train, horizon))
        forecasts[s] = path[horizon - 1]
        targets[s] = values[s + train_len + horizon - 1]

    diff = forecasts - targets
    return RollingForecastResult(
        rrmse=float(np.sqrt(np.mean(diff**2))),
        rmae=float(np.mean(np.abs(diff))),
        forecasts=forecasts,
        targets=targets,
    )
