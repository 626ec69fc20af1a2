"""Refined estimation through projection onto the leading eigenspaces.

Instead of wrestling a rank-deficient pencil in the ambient dimension, this
method first projects the series onto the top-``order`` eigenvectors of the
accumulated lag-covariance products, then solves a full-rank
``order x order`` eigenproblem on the projected series.  The small problem
is well conditioned, which buys a substantial finite-sample improvement over
the direct method, especially for larger orders.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._linalg import (
    as_generator,
    check_eigenvalue_separation,
    normalize_column,
    sort_eigenpairs,
)
from .covariance import projected_lag_covariance
from .decomposition import CPDecomposition
from .exceptions import EigenGapCollapse, RankDeficientLoadings, SingularGram
from .factors import build_decomposition
from .proxy import make_proxy
from .rank import eigenvalue_ratio_rank, lag_product_matrices, preferred_rank_source
from .validation import check_series_values

COND_LIMIT = 1e12


@dataclass(frozen=True)
class Projection:
    """Leading eigenspaces of the lag-product matrices and the projected series."""

    row_basis: np.ndarray  # (p, order), orthonormal columns
    col_basis: np.ndarray  # (q, order), orthonormal columns
    projected: np.ndarray  # (n, order, order)


def _leading_eigenvectors(matrix: np.ndarray, order: int) -> np.ndarray:
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]
    top = eigenvalues[0]
    if order < matrix.shape[0] and eigenvalues[order - 1] - eigenvalues[order] < 1e-10 * max(top, 0.0):
        warnings.warn(
            f"eigengap below the selected order {order} is numerically zero",
            EigenGapCollapse,
            stacklevel=3,
        )
    basis = eigenvectors[:, :order]
    return np.column_stack([normalize_column(v).real for v in basis.T])


def project_series(series, m1: np.ndarray, m2: np.ndarray, order: int) -> Projection:
    """Project the series onto the top-``order`` eigenvectors of ``m1``/``m2``.

    Eigenvectors are sorted by eigenvalue descending with the
    largest-magnitude entry of each made positive.  Warns with
    :class:`EigenGapCollapse` when the eigengap at the cut is numerically
    zero (the basis is then ill determined).
    """
    values = check_series_values(series)
    _, p, q = values.shape
    if order > min(p, q) - 1:
        raise ValueError(f"order {order} too large for dimensions ({p}, {q})")
    row_basis = _leading_eigenvectors(np.asarray(m1, dtype=float), order)
    col_basis = _leading_eigenvectors(np.asarray(m2, dtype=float), order)
    projected = np.einsum("ir,tij,jc->trc", row_basis, values, col_basis)
    return Projection(row_basis=row_basis, col_basis=col_basis, projected=projected)


def refined_estimate(
    series,
    proxy_strategy: str = "pca",
    n_lags: int = 3,
    level: float = 0.0,
    proj_level: float = 0.0,
    ridge: float = 0.0,
    search_frac: float = 0.5,
    seed=None,
) -> CPDecomposition:
    """Fit the CP structure by the refined (projected) method.

    Parameters
    ----------
    series : MatrixSeries or (n, p, q) array_like
    proxy_strategy : {"pca", "random"}
        Construction of the scalar proxies, used twice: once on the raw
        series and once on the projected series.
    n_lags : int
        Number of lags accumulated into the projection matrices.
    level : float
        Hard-threshold level for the raw lag covariances.
    proj_level : float
        Hard-threshold level inside the projected covariance estimator.
    ridge, search_frac : float
        Order-selection settings.
    seed : optional
        Seeds the random proxy draws; ignored for the PCA strategy.

    Returns
    -------
    CPDecomposition

    Raises
    ------
    SingularGram
        If the lag-1 projected covariance Gram system is numerically
        singular (condition number above 1e12).
    EigenvalueCollision
        If the small eigenproblem has nearly coincident eigenvalues; retry
        with another seed or proxy strategy.
    """
    values = check_series_values(series)
    _, p, q = values.shape
    rng = as_generator(seed)

    xi = make_proxy(values, proxy_strategy, rng)
    m1, m2 = lag_product_matrices(values, xi.values, n_lags, level)
    source = preferred_rank_source(p, q)
    diagnostics = eigenvalue_ratio_rank(
        m1 if source == "M1" else m2,
        ridge=ridge,
        search_frac=search_frac,
        dim_bound=min(p, q),
        source=source,
    )
    order = diagnostics.order

    projection = project_series(values, m1, m2, order)
    eta = make_proxy(projection.projected, proxy_strategy, rng)
    cov1 = projected_lag_covariance(
        values, projection.row_basis, projection.col_basis, eta.weight, 1, proj_level
    )
    cov2 = projected_lag_covariance(
        values, projection.row_basis, projection.col_basis, eta.weight, 2, proj_level
    )

    gram = cov1.T @ cov1
    if np.linalg.cond(gram) > COND_LIMIT:
        raise SingularGram("lag-1 projected covariance Gram matrix is singular")
    j1 = np.linalg.solve(gram, cov1.T @ cov2)

    eigenvalues, vectors = np.linalg.eig(j1)
    eigenvalues, vectors = sort_eigenpairs(eigenvalues, vectors)
    check_eigenvalue_separation(eigenvalues)
    vectors = np.column_stack([normalize_column(v) for v in vectors.T])

    u = cov1 @ vectors
    norms = np.linalg.norm(u, axis=0)
    if np.any(norms == 0):
        raise RankDeficientLoadings("a projected loading column collapsed to zero")
    u = u / norms
    try:
        u_inv = np.linalg.inv(u)
    except np.linalg.LinAlgError:
        raise RankDeficientLoadings("projected loading matrix is singular") from None
    v = cov1.T @ u_inv.T
    v = v / np.linalg.norm(v, axis=0)

    row = projection.row_basis @ u
    col = projection.col_basis @ v

    config = {
        "K": int(n_lags),
        "delta1": float(level),
        "delta2": float(proj_level),
        "cn": float(ridge),
        "alpha": float(search_frac),
        "proxy": proxy_strategy,
        "seed": seed if isinstance(seed, int) or seed is None else None,
    }
    return build_decomposition(
        values, row, col, eigenvalues, "refined", config, diagnostics
    )
