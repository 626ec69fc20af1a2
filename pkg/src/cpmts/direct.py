"""Direct one-pass estimation from lag-1 and lag-2 proxy covariances.

The latent structure is read off a generalized eigenproblem between the
lag-1 Gram matrix and the lag-1/lag-2 cross-product matrix of the proxy
covariances.  The Gram side is rank deficient, so the problem is solved on
its leading eigenspace: truncating to the selected order turns the pencil
into a small full-rank standard eigenproblem with exactly ``order`` finite
eigenvalues, sidestepping the instabilities of a full QZ factorization.

Rows and columns play symmetric roles; when ``p < q`` the series is
transposed internally so the eigenproblem always lives in the smaller
dimension, and the loadings are swapped back on output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import (
    check_eigenvalue_separation,
    normalize_column,
    pinv_rcond,
    require_full_column_rank,
    sort_eigenpairs,
)
from .covariance import hard_threshold, lag_covariance
from .decomposition import CPDecomposition
from .exceptions import RankDeficientLoadings
from .factors import build_decomposition
from .proxy import ProxySeries
from .rank import eigenvalue_ratio_rank
from .validation import check_proxy_values, check_series_values


@dataclass(frozen=True)
class TruncatedPencil:
    """Order-truncated matrix pencil of the direct method.

    ``cross`` is the full lag-1/lag-2 cross-product matrix; the Gram side is
    kept in factored form through its leading eigenpairs (``basis``,
    ``weights``).  ``transposed`` records whether the series was flipped to
    put the pencil in the smaller dimension.
    """

    lag1_cov: np.ndarray  # (p', q') thresholded lag-1 covariance
    cross: np.ndarray  # (q', q')
    basis: np.ndarray  # (q', order) leading Gram eigenvectors
    weights: np.ndarray  # (order,) leading Gram eigenvalues
    order: int
    transposed: bool

    @property
    def truncated_gram(self) -> np.ndarray:
        """The rank-``order`` truncation of the lag-1 Gram matrix."""
        return (self.basis * self.weights) @ self.basis.T


def _oriented(values: np.ndarray):
    n, p, q = values.shape
    if p < q:
        return values.transpose(0, 2, 1), True
    return values, False


def build_pencil(
    series,
    proxy,
    level: float = 0.0,
    ridge: float = 0.0,
    search_frac: float = 0.5,
):
    """Form the truncated pencil and select its order.

    Parameters
    ----------
    series : MatrixSeries or (n, p, q) array_like
    proxy : ProxySeries or (n,) array_like
        Scalar proxy series driving the lag covariances.
    level : float
        Hard-threshold level for the lag covariances.
    ridge, search_frac : float
        Ratio-rule settings, see :func:`cpmts.rank.eigenvalue_ratio_rank`.

    Returns
    -------
    (TruncatedPencil, RankDiagnostics)
    """
    values = check_series_values(series)
    xi = check_proxy_values(proxy, values.shape[0])
    values, transposed = _oriented(values)

    sigma1 = hard_threshold(lag_covariance(values, xi, 1).matrix, level)
    sigma2 = hard_threshold(lag_covariance(values, xi, 2).matrix, level)
    gram = sigma1.T @ sigma1
    cross = sigma1.T @ sigma2

    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (gram + gram.T))
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]
    diagnostics = eigenvalue_ratio_rank(
        eigenvalues,
        ridge=ridge,
        search_frac=search_frac,
        dim_bound=min(values.shape[1], values.shape[2]),
        source="K1q",
    )
    order = diagnostics.order
    pencil = TruncatedPencil(
        lag1_cov=sigma1,
        cross=cross,
        basis=eigenvectors[:, :order],
        weights=eigenvalues[:order],
        order=order,
        transposed=transposed,
    )
    return pencil, diagnostics


def solve_pencil(pencil: TruncatedPencil):
    """Eigenpairs of the truncated pencil.

    Projects the cross-product matrix onto the truncation basis and solves
    the resulting ``order x order`` standard eigenproblem; the reported
    eigenvectors are mapped back to the ambient dimension, unit-normalized,
    and phase-fixed.

    Returns
    -------
    eigenvalues : (order,) complex ndarray, sorted by (real, imag) descending
    vectors : (q', order) complex ndarray

    Raises
    ------
    EigenvalueCollision
        If two eigenvalues nearly coincide (the conjugate-pair structure of
        the output is only guaranteed for distinct eigenvalues).
    """
    if np.any(pencil.weights <= 0):
        raise RankDeficientLoadings(
            "truncated Gram matrix is not positive on its leading eigenspace"
        )
    reduced = (pencil.basis.T @ pencil.cross @ pencil.basis) / pencil.weights[:, None]
    eigenvalues, small_vectors = np.linalg.eig(reduced)
    eigenvalues, small_vectors = sort_eigenpairs(eigenvalues, small_vectors)
    check_eigenvalue_separation(eigenvalues)
    vectors = pencil.basis @ small_vectors
    vectors = np.column_stack([normalize_column(v) for v in vectors.T])
    return eigenvalues, vectors


def direct_estimate(
    series,
    proxy,
    level: float = 0.0,
    ridge: float = 0.0,
    search_frac: float = 0.5,
    seed=None,
) -> CPDecomposition:
    """Fit the CP structure by the direct method.

    Parameters
    ----------
    series : MatrixSeries or (n, p, q) array_like
    proxy : ProxySeries or (n,) array_like
    level : float
        Hard-threshold level for the lag covariances (use 0 for small p, q).
    ridge, search_frac : float
        Order-selection settings.
    seed : optional
        Echoed into the config for provenance; the direct method itself
        draws no randomness.

    Returns
    -------
    CPDecomposition

    Raises
    ------
    RankDeficientLoadings
        If the estimated row loadings lose numerical column rank.
    """
    values = check_series_values(series)
    pencil, diagnostics = build_pencil(
        values, proxy, level=level, ridge=ridge, search_frac=search_frac
    )
    eigenvalues, vectors = solve_pencil(pencil)

    sigma1 = pencil.lag1_cov
    row = sigma1 @ vectors
    norms = np.linalg.norm(row, axis=0)
    if np.any(norms == 0):
        raise RankDeficientLoadings("an estimated row loading collapsed to zero")
    row = row / norms
    require_full_column_rank(row, "row loading estimate")
    row_pinv = np.linalg.pinv(row, rcond=pinv_rcond(row.shape))
    col = sigma1.T @ row_pinv.T
    col = col / np.linalg.norm(col, axis=0)

    if pencil.transposed:
        row, col = col, row

    strategy = proxy.strategy if isinstance(proxy, ProxySeries) else "custom"
    config = {
        "K": None,
        "delta1": float(level),
        "delta2": None,
        "cn": float(ridge),
        "alpha": float(search_frac),
        "proxy": strategy,
        "seed": seed if isinstance(seed, int) or seed is None else None,
        "transposed": pencil.transposed,
    }
    return build_decomposition(
        values, row, col, eigenvalues, "direct", config, diagnostics
    )
