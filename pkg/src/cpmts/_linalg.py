"""Small linear-algebra helpers shared across estimation modules."""

from __future__ import annotations

import numpy as np

from .exceptions import EigenvalueCollision, RankDeficientLoadings

# Relative cutoff for Moore-Penrose inverses and rank decisions:
# max(m, n) * eps * sigma_max.
def pinv_rcond(shape) -> float:
    return max(shape) * np.finfo(float).eps


def vec(mat: np.ndarray) -> np.ndarray:
    """Stack the columns of ``mat`` into one vector."""
    return np.asarray(mat).T.ravel()


def vec_all(values: np.ndarray) -> np.ndarray:
    """Column-stack every slice of an ``(n, p, q)`` array into ``(n, p*q)`` rows."""
    n = values.shape[0]
    return values.transpose(0, 2, 1).reshape(n, -1)


def normalize_column(v: np.ndarray) -> np.ndarray:
    """Scale ``v`` to unit length and rotate its largest-modulus entry onto
    the positive real axis.

    Removes both the length and the complex-phase ambiguity of an
    eigenvector deterministically; for real input this reduces to a sign
    convention.
    """
    v = np.asarray(v)
    norm = np.linalg.norm(v)
    if norm == 0:
        return v.copy()
    v = v / norm
    pivot = v[np.argmax(np.abs(v))]
    mag = abs(pivot)
    if mag > 0:
        v = v * (np.conj(pivot) / mag)
    return v


def sort_eigenpairs(eigenvalues: np.ndarray, eigenvectors: np.ndarray):
    """Order eigenpairs by (real part, imaginary part), both descending.

    Fixes the output column order so conjugate pairs sit next to each other
    and repeated runs agree bit for bit.
    """
    order = np.lexsort((-eigenvalues.imag, -eigenvalues.real))
    return eigenvalues[order], eigenvectors[:, order]


def check_eigenvalue_separation(eigenvalues: np.ndarray, rtol: float = 1e-8) -> None:
    """Raise :class:`EigenvalueCollision` if two eigenvalues nearly coincide.

    Closeness is measured against the spectral spread (largest pairwise
    distance), so the check is scale-free.
    """
    lam = np.asarray(eigenvalues)
    if lam.size < 2:
        return
    diff = np.abs(lam[:, None] - lam[None, :])
    mask = ~np.eye(lam.size, dtype=bool)
    spread = diff[mask].max()
    closest = diff[mask].min()
    if closest <= rtol * max(spread, np.finfo(float).tiny):
        raise EigenvalueCollision(
            f"eigenvalues separated by {closest:.3e} against spread {spread:.3e}"
        )


def column_rank(mat: np.ndarray) -> int:
    """Numerical column rank under the package-wide SVD tolerance."""
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > pinv_rcond(mat.shape) * s[0]))


def require_full_column_rank(mat: np.ndarray, what: str) -> None:
    if column_rank(mat) < mat.shape[1]:
        raise RankDeficientLoadings(
            f"{what} has numerical column rank below {mat.shape[1]}"
        )


def as_generator(seed) -> np.random.Generator:
    """Return ``seed`` unchanged if it is already a Generator, else seed one."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
