"""Conjugate-pair bookkeeping and realification of the latent series.

Complex components of a fitted decomposition always occur in conjugate
pairs, so the ``order`` columns can be repackaged as ``order`` real series:
one series per real column plus (real part, imaginary part) per pair.
Univariate models then apply directly, and the metadata is enough to rebuild
the complex factor columns afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .decomposition import ConjugatePair, CPDecomposition
from .exceptions import ResidualImaginaryPart, UnmatchedComplexEigenvalue

PAIR_TOL = 1e-8
REAL_IMAG_TOL = 1e-6


def pair_conjugates(eigenvalues, tol: float = PAIR_TOL):
    """Partition eigenvalue indices into real ones and conjugate pairs.

    An eigenvalue is real when ``|Im| <= tol * (1 + |lam|)``; two non-real
    eigenvalues pair when ``|lam_l - conj(lam_r)| <= tol * (1 + |lam_l|)``.

    Returns
    -------
    pairs : list of (left, right) index tuples, left holding Im > 0
    reals : list of int

    Raises
    ------
    UnmatchedComplexEigenvalue
        If some non-real eigenvalue has no partner within tolerance.
    """
    lam = np.asarray(eigenvalues, dtype=complex)
    reals = [i for i in range(lam.size) if abs(lam[i].imag) <= tol * (1 + abs(lam[i]))]
    open_idx = [i for i in range(lam.size) if i not in reals]

    pairs = []
    while open_idx:
        i = open_idx.pop(0)
        scale = tol * (1 + abs(lam[i]))
        match = None
        for j in open_idx:
            if abs(lam[i] - np.conj(lam[j])) <= scale:
                match = j
                break
        if match is None:
            raise UnmatchedComplexEigenvalue(
                f"eigenvalue {lam[i]} has no conjugate partner"
            )
        open_idx.remove(match)
        pairs.append((i, match) if lam[i].imag > 0 else (match, i))
    return pairs, reals


def resolve_pair_signs(pairs, row_loadings) -> tuple[ConjugatePair, ...]:
    """Attach the +-1 constant relating each pair of loading columns.

    The sign is recovered by testing both candidates and keeping the one
    minimizing ``|a_right - sign * conj(a_left)|``.
    """
    resolved = []
    for left, right in pairs:
        a_left = row_loadings[:, left]
        a_right = row_loadings[:, right]
        plus = np.linalg.norm(a_right - np.conj(a_left))
        minus = np.linalg.norm(a_right + np.conj(a_left))
        resolved.append(ConjugatePair(left, right, 1 if plus <= minus else -1))
    return tuple(resolved)


def build_decomposition(
    series,
    row_loadings: np.ndarray,
    col_loadings: np.ndarray,
    eigenvalues: np.ndarray,
    method: str,
    config: dict,
    diagnostics=None,
) -> CPDecomposition:
    """Assemble the final record from estimated loadings.

    Renormalizes the loading columns, recovers the latent series through the
    pseudoinverse of the component basis, and fills in the conjugate-pair
    map.
    """
    from .decomposition import recover_factors

    row_loadings = np.asarray(row_loadings)
    col_loadings = np.asarray(col_loadings)
    row_loadings = row_loadings / np.linalg.norm(row_loadings, axis=0)
    col_loadings = col_loadings / np.linalg.norm(col_loadings, axis=0)

    factors = recover_factors(series, row_loadings, col_loadings)
    raw_pairs, reals = pair_conjugates(eigenvalues)
    return CPDecomposition(
        order=row_loadings.shape[1],
        row_loadings=row_loadings,
        col_loadings=col_loadings,
        factors=factors,
        eigenvalues=np.asarray(eigenvalues, dtype=complex),
        pairs=resolve_pair_signs(raw_pairs, row_loadings),
        real_columns=tuple(reals),
        method=method,
        config=config,
        diagnostics=diagnostics,
    )


class RealComponent(NamedTuple):
    kind: str  # "real"
    column: int


class PairComponent(NamedTuple):
    kind: str  # "pair"
    left: int
    right: int
    sign: int


@dataclass(frozen=True)
class RealifiedFactors:
    """Real repackaging of a complex factor matrix.

    ``series`` holds one column per emitted real series; ``components``
    records, in emission order, either a real column or a conjugate pair
    contributing its (Re, Im) columns.
    """

    series: np.ndarray  # (n, order) real
    components: tuple


def realify(decomposition: CPDecomposition) -> RealifiedFactors:
    """Split the factor columns into real series.

    Emits, scanning columns left to right: the real column itself for each
    real component, and the (Re, Im) of the left column for each conjugate
    pair (the right column is its conjugate and is dropped).

    Raises
    ------
    ResidualImaginaryPart
        If a column flagged real has imaginary magnitude above 1e-6.
    """
    factors = decomposition.factors
    pair_of = {p.left: p for p in decomposition.pairs}
    skip = {p.right for p in decomposition.pairs}
    real_set = set(decomposition.real_columns)

    columns = []
    components = []
    for col in range(decomposition.order):
        if col in skip:
            continue
        if col in real_set:
            x = factors[:, col]
            resid = np.abs(x.imag).max(initial=0.0)
            if resid > REAL_IMAG_TOL * (1 + np.abs(x.real).max(initial=0.0)):
                raise ResidualImaginaryPart(
                    f"column {col} flagged real has imaginary magnitude {resid:.3e}"
                )
            columns.append(x.real)
            components.append(RealComponent("real", col))
        else:
            pair = pair_of[col]
            columns.append(factors[:, col].real)
            columns.append(factors[:, col].imag)
            components.append(PairComponent("pair", pair.left, pair.right, pair.sign))
    return RealifiedFactors(
        series=np.column_stack(columns) if columns else np.empty((factors.shape[0], 0)),
        components=tuple(components),
    )


def recombine(realified: np.ndarray, components, order: int) -> np.ndarray:
    """Rebuild ``(m, order)`` complex factors from realified series.

    Inverse of :func:`realify` for any number ``m`` of time points (e.g.
    forecast horizons).
    """
    realified = np.atleast_2d(np.asarray(realified, dtype=float))
    out = np.zeros((realified.shape[0], order), dtype=complex)
    col = 0
    for comp in components:
        if comp.kind == "real":
            out[:, comp.column] = realified[:, col]
            col += 1
        else:
            z = realified[:, col] + 1j * realified[:, col + 1]
            out[:, comp.left] = z
            out[:, comp.right] = np.conj(z)
            col += 2
    return out
