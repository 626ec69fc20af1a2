"""Input validation helpers.

Estimation entry points accept either a :class:`~cpmts.series.MatrixSeries`
or a plain ``(n, p, q)`` array; these helpers funnel both into validated
float arrays, in the spirit of scikit-learn's ``check_array``.
"""

from __future__ import annotations

import numpy as np

from .exceptions import NonFiniteEntry, ShapeMismatch


def check_series_values(X, min_length: int = 3) -> np.ndarray:
    """Coerce ``X`` to a validated ``(n, p, q)`` float64 array.

    Parameters
    ----------
    X : array_like or MatrixSeries
        Stack of ``n`` real ``p x q`` observation matrices.
    min_length : int
        Fewest time points accepted; the default keeps lags 1 and 2
        computable downstream.
    """
    values = getattr(X, "values", X)
    values = np.asarray(values, dtype=float)
    if values.ndim != 3:
        raise ShapeMismatch(f"expected a (n, p, q) array, got shape {values.shape}")
    n, p, q = values.shape
    if p < 1 or q < 1:
        raise ShapeMismatch(f"matrix dimensions must be positive, got ({p}, {q})")
    if n < min_length:
        raise ShapeMismatch(f"need at least {min_length} observations, got {n}")
    if not np.isfinite(values).all():
        raise NonFiniteEntry("series contains NaN or infinite entries")
    return values


def check_proxy_values(xi, n: int) -> np.ndarray:
    """Coerce a scalar proxy series to a validated length-``n`` float vector."""
    values = getattr(xi, "values", xi)
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.shape[0] != n:
        raise ShapeMismatch(
            f"proxy series must have shape ({n},), got {values.shape}"
        )
    if not np.isfinite(values).all():
        raise NonFiniteEntry("proxy series contains NaN or infinite entries")
    return values


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape {a.shape} does not match {b.shape}")
