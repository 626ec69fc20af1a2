"""Order selection by the eigenvalue-ratio rule."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .covariance import hard_threshold, lag_covariance
from .exceptions import AllZeroSpectrum, LagTooLarge
from .validation import check_proxy_values, check_series_values

# Eigenvalues below this fraction of the top eigenvalue are treated as zero,
# suppressing sign noise from the symmetric eigensolver.
CLAMP_REL = 1e-14


@dataclass(frozen=True)
class RankDiagnostics:
    """Everything the ratio rule looked at when choosing the order."""

    eigenvalues: np.ndarray  # nonincreasing, clamped
    ratios: np.ndarray  # length ``search_bound``; skipped 0/0 entries are +inf
    order: int
    source: str  # "M1" | "M2" | "K1q"
    search_bound: int
    ridge: float


def lag_product_matrices(series, proxy, n_lags: int, level: float = 0.0):
    """Accumulated products of thresholded lag covariances.

    Returns the pair ``(M1, M2)`` with
    ``M1 = sum_k S_k S_k'`` (``p x p``) and ``M2 = sum_k S_k' S_k``
    (``q x q``), where ``S_k`` is the thresholded lag-``k`` covariance and
    ``k`` runs over ``1..n_lags``.  Both are symmetric positive semidefinite.

    Keep ``n_lags`` modest (10 at most): every extra lag adds estimation
    noise to the accumulated products, and very deep stacks hurt the order
    selection more than they help.
    """
    values = check_series_values(series)
    n, p, q = values.shape
    xi = check_proxy_values(proxy, n)
    if not 1 <= n_lags <= n - 2:
        raise LagTooLarge(f"n_lags {n_lags} outside [1, {n - 2}] for n={n}")

    m1 = np.zeros((p, p))
    m2 = np.zeros((q, q))
    for k in range(1, n_lags + 1):
        s_k = hard_threshold(lag_covariance(values, xi, k).matrix, level)
        m1 += s_k @ s_k.T
        m2 += s_k.T @ s_k
    return 0.5 * (m1 + m1.T), 0.5 * (m2 + m2.T)


def eigenvalue_ratio_rank(
    matrix,
    ridge: float = 0.0,
    search_frac: float = 0.5,
    dim_bound: int | None = None,
    source: str = "M1",
) -> RankDiagnostics:
    """Pick the order as the argmin of consecutive ridge-shifted eigenvalue
    ratios.

    Parameters
    ----------
    matrix : symmetric psd ndarray, or a precomputed 1-d eigenvalue array
    ridge : float
        Constant added to numerator and denominator; guards the 0/0 case.
    search_frac : float in (0, 1)
        The search runs over ``j = 1..R`` with
        ``R = floor(search_frac * dim_bound)``.
    dim_bound : int, optional
        Dimension the search bound is derived from.  Callers working from a
        series pass ``min(p, q)``; defaults to the matrix dimension.
    source : str
        Label recorded in the diagnostics ("M1", "M2" or "K1q").

    Notes
    -----
    Ratios are ``(lam[j+1] + ridge) / (lam[j] + ridge)``; with ``ridge == 0``
    a 0/0 entry is defined as ``+inf`` and therefore never selected.  Ties
    resolve to the smallest ``j``.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim == 1:
        eigenvalues = np.sort(matrix)[::-1]
    else:
        eigenvalues = np.linalg.eigvalsh(matrix)[::-1]
    m = eigenvalues.shape[0]
    if m < 2:
        raise ValueError("need a spectrum of length at least 2")
    if not 0 < search_frac < 1:
        raise ValueError("search_frac must lie in (0, 1)")

    top = eigenvalues[0]
    eigenvalues = np.where(eigenvalues < CLAMP_REL * max(top, 0.0), 0.0, eigenvalues)
    if eigenvalues[0] <= 0 and ridge == 0:
        raise AllZeroSpectrum("all eigenvalues are numerically zero with no ridge")

    if dim_bound is None:
        dim_bound = m
    bound = int(np.floor(search_frac * dim_bound))
    if bound < 1:
        warnings.warn(
            f"search bound floor({search_frac} * {dim_bound}) < 1; forcing 1",
            stacklevel=2,
        )
        bound = 1
    bound = min(bound, m - 1)

    num = eigenvalues[1 : bound + 1] + ridge
    den = eigenvalues[:bound] + ridge
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = num / den
    ratios = np.where(den == 0, np.inf, ratios)

    return RankDiagnostics(
        eigenvalues=eigenvalues,
        ratios=ratios,
        order=int(np.argmin(ratios)) + 1,
        source=source,
        search_bound=bound,
        ridge=float(ridge),
    )


def preferred_rank_source(p: int, q: int) -> str:
    """Which accumulated product matrix the order should come from.

    The taller side carries more averaging: use ``M1`` when ``p >= q`` and
    ``M2`` otherwise.
    """
    return "M1" if p >= q else "M2"
