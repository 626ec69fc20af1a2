"""Lag covariances between a matrix series and a scalar proxy.

The refined method additionally needs the cross covariance between the
projected series ``Z_t = P' Y_t Q`` and its own proxy; that quantity can be
written as a projection of a ``(p^2 q) x q`` lagged covariance of the raw
series, on which entrywise thresholding is defined.  The implementation
streams that large matrix in ``p`` row blocks of size ``(p q) x q`` so it is
never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import vec_all
from .exceptions import LagTooLarge, NonOrthonormalProjection
from .validation import check_proxy_values, check_series_values

_ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class LagCovariance:
    """A ``p x q`` lag-``k`` cross covariance between series and proxy."""

    lag: int
    matrix: np.ndarray


def _check_lag(lag: int, n: int) -> None:
    if not 1 <= lag <= n - 2:
        raise LagTooLarge(f"lag {lag} outside [1, {n - 2}] for n={n}")


def lag_covariance(series, proxy, lag: int) -> LagCovariance:
    """Average of ``(Y_t - Ybar)(xi_{t-k} - xibar)`` over ``t = k+1..n``.

    Both means are full-sample means; the divisor is ``n - k``.

    Raises
    ------
    LagTooLarge
        If ``lag`` exceeds ``n - 2`` (lag 2 must stay computable downstream).
    """
    values = check_series_values(series)
    n = values.shape[0]
    _check_lag(lag, n)
    xi = check_proxy_values(proxy, n)

    centered = values - values.mean(axis=0)
    xi_c = xi - xi.mean()
    matrix = np.tensordot(xi_c[: n - lag], centered[lag:], axes=(0, 0)) / (n - lag)
    return LagCovariance(lag=lag, matrix=matrix)


def hard_threshold(matrix, level: float) -> np.ndarray:
    """Zero out entries with modulus below ``level``; keeps ties."""
    if level < 0:
        raise ValueError("threshold level must be nonnegative")
    matrix = np.asarray(matrix, dtype=float)
    if level == 0:
        return matrix.copy()
    return np.where(np.abs(matrix) >= level, matrix, 0.0)


def _check_orthonormal(basis: np.ndarray, name: str) -> None:
    gram = basis.T @ basis
    if np.max(np.abs(gram - np.eye(basis.shape[1]))) > _ORTHO_TOL:
        raise NonOrthonormalProjection(f"{name} columns are not orthonormal")


def projected_lag_covariance(
    series,
    row_basis: np.ndarray,
    col_basis: np.ndarray,
    weight: np.ndarray,
    lag: int,
    level: float = 0.0,
) -> np.ndarray:
    """Lag covariance of the projected series against its scalar proxy.

    Parameters
    ----------
    series : MatrixSeries or (n, p, q) array_like
    row_basis : (p, d) ndarray
        Orthonormal columns spanning the row space (checked to 1e-10).
    col_basis : (q, d) ndarray
        Orthonormal columns spanning the column space.
    weight : (d*d,) ndarray
        Coefficients of the proxy functional on ``vec(Z_t)``.
    lag : int
    level : float
        Hard-threshold level applied entrywise to the underlying
        ``(p^2 q) x q`` lagged covariance before projection.

    Returns
    -------
    (d, d) ndarray

    Notes
    -----
    With ``level == 0`` the computation collapses to the direct cross
    covariance of ``Z_t = row_basis' Y_t col_basis`` with
    ``eta_t = weight . vec(Z_t)``, which is cheap.  With ``level > 0`` it
    falls through to :func:`streamed_projected_lag_covariance`.
    """
    values = check_series_values(series)
    n = values.shape[0]
    _check_lag(lag, n)
    row_basis = np.asarray(row_basis, dtype=float)
    col_basis = np.asarray(col_basis, dtype=float)
    weight = np.asarray(weight, dtype=float)
    _check_orthonormal(row_basis, "row basis")
    _check_orthonormal(col_basis, "column basis")

    if level == 0:
        projected = np.einsum("ir,tij,jc->trc", row_basis, values, col_basis)
        eta = vec_all(projected) @ weight
        eta_c = eta - eta.mean()
        z_c = projected - projected.mean(axis=0)
        return np.tensordot(eta_c[: n - lag], z_c[lag:], axes=(0, 0)) / (n - lag)

    return streamed_projected_lag_covariance(
        values, row_basis, col_basis, weight, lag, level
    )


def streamed_projected_lag_covariance(
    series,
    row_basis: np.ndarray,
    col_basis: np.ndarray,
    weight: np.ndarray,
    lag: int,
    level: float = 0.0,
) -> np.ndarray:
    """General path of :func:`projected_lag_covariance`.

    Streams the underlying ``(p^2 q) x q`` lagged covariance in ``p`` row
    blocks of shape ``(p q, q)`` (one per outer row index, fixed serial
    order), hard-thresholds each block, collapses it with the proxy
    functional and projects the accumulated ``p x q`` matrix.  Peak extra
    memory is one block; at ``level == 0`` it agrees with the shortcut in
    exact arithmetic.
    """
    values = check_series_values(series)
    n, p, q = values.shape
    _check_lag(lag, n)
    row_basis = np.asarray(row_basis, dtype=float)
    col_basis = np.asarray(col_basis, dtype=float)
    _check_orthonormal(row_basis, "row basis")
    _check_orthonormal(col_basis, "column basis")

    centered = values - values.mean(axis=0)
    lagged_flat = vec_all(centered[: n - lag])  # rows vec(Y_{t-k} - Ybar)
    lead = centered[lag:]
    functional = np.kron(col_basis, row_basis) @ np.asarray(weight, dtype=float)

    collapsed = np.empty((p, q))
    for i in range(p):
        block = lagged_flat.T @ lead[:, i, :] / (n - lag)  # (p*q, q)
        if level > 0:
            block[np.abs(block) < level] = 0.0
        collapsed[i] = functional @ block
    return row_basis.T @ collapsed @ col_basis
