"""Scalar proxy series.

Both estimation methods drive their lag covariances with a scalar linear
functional of the observed matrices.  Two constructions are provided:

* ``pca``: run a PCA on the ``(n, p*q)`` matrix of flattened slices, keep the
  smallest number ``m`` of leading components whose cumulative variance share
  reaches 99%, and project onto the unit-normalized mean of their loading
  vectors.  For ``m = 1`` this is exactly the first principal-component score
  series; for ``m >= 2`` it equals the average of the ``m`` score series
  rescaled by ``sqrt(m)``, a positive factor the downstream estimators are
  invariant to.
* ``random``: project onto a unit vector drawn uniformly from ``[0, 1]^{p q}``
  and normalized.

The same constructions serve the refined method on the projected series,
where ``p*q`` becomes ``order**2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import as_generator, vec_all
from .exceptions import DegenerateCovariance
from .validation import check_series_values

VARIANCE_SHARE = 0.99


@dataclass(frozen=True)
class ProxySeries:
    """A scalar series ``weight . vec(Y_t)`` (possibly centered).

    ``weight`` always has unit length; ``values[t]`` equals
    ``weight @ vec(Y_t)`` up to one additive constant shared by all ``t``,
    which every downstream covariance removes.  ``n_components`` records how
    many principal components fed the weight (1 for the random strategy).
    """

    values: np.ndarray  # (n,)
    strategy: str  # "pca" | "random"
    weight: np.ndarray  # (p*q,) unit vector
    n_components: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        object.__setattr__(self, "weight", np.asarray(self.weight, dtype=float))


def pca_proxy(series) -> ProxySeries:
    """Principal-component proxy of a matrix series.

    Components are kept until they explain at least 99% of total variance
    (sample covariance of the centered flattened slices, divisor ``n - 1``).
    Each loading vector has its largest-magnitude entry made positive before
    averaging, so the result does not depend on eigensolver sign choices.

    Raises
    ------
    DegenerateCovariance
        If the flattened series has zero total variance.
    """
    values = check_series_values(series, min_length=2)
    flat = vec_all(values)
    centered = flat - flat.mean(axis=0)
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    variances = svals**2 / (flat.shape[0] - 1)
    total = variances.sum()
    if total <= 0:
        raise DegenerateCovariance("flattened series has zero total variance")

    shares = np.cumsum(variances) / total
    m = int(np.searchsorted(shares, VARIANCE_SHARE - 1e-12) + 1)
    m = min(m, len(variances))
    loadings = vt[:m].copy()
    for row in loadings:
        pivot = row[np.argmax(np.abs(row))]
        if pivot < 0:
            row *= -1.0
    weight = loadings.mean(axis=0)
    weight = weight / np.linalg.norm(weight)
    return ProxySeries(
        values=centered @ weight, strategy="pca", weight=weight, n_components=m
    )


def random_proxy(series, rng=None) -> ProxySeries:
    """Randomly weighted proxy: unit-normalized uniform ``[0, 1]`` weights."""
    values = check_series_values(series, min_length=1)
    rng = as_generator(rng)
    weight = rng.uniform(0.0, 1.0, size=values.shape[1] * values.shape[2])
    weight = weight / np.linalg.norm(weight)
    return ProxySeries(values=vec_all(values) @ weight, strategy="random", weight=weight)


def make_proxy(series, strategy: str, rng=None) -> ProxySeries:
    """Dispatch on strategy name; used for both raw and projected series."""
    if strategy == "pca":
        return pca_proxy(series)
    if strategy == "random":
        return random_proxy(series, rng)
    raise ValueError(f"unknown proxy strategy {strategy!r}")
