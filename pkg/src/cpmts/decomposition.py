"""The fitted decomposition record shared by both estimation methods."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._linalg import pinv_rcond, require_full_column_rank, vec_all
from .validation import check_series_values


class ConjugatePair(NamedTuple):
    """Indices of two columns tied by complex conjugation, plus the sign."""

    left: int
    right: int
    sign: int


@dataclass(frozen=True)
class CPDecomposition:
    """Result of a one-pass CP fit to a matrix time series.

    Attributes
    ----------
    order : int
        Estimated number of rank-one components.
    row_loadings : (p, order) complex ndarray
        Unit-norm column patterns acting on the rows.
    col_loadings : (q, order) complex ndarray
        Unit-norm column patterns acting on the columns.
    factors : (n, order) complex ndarray
        Recovered latent series, one column per component.
    eigenvalues : (order,) complex ndarray
        Spectrum of the defining eigenproblem, sorted by (real, imag)
        descending.
    pairs : tuple of ConjugatePair
        Complex components always come in conjugate pairs; ``sign`` is the
        +-1 constant relating the paired loading columns.
    real_columns : tuple of int
        Components whose loadings and factors are real.
    method : str
        "direct" or "refined".
    config : dict
        Echo of the estimation settings, serialized verbatim.
    diagnostics : RankDiagnostics or None
        Order-selection trace; not part of the serialized form.
    """

    order: int
    row_loadings: np.ndarray
    col_loadings: np.ndarray
    factors: np.ndarray
    eigenvalues: np.ndarray
    pairs: tuple[ConjugatePair, ...]
    real_columns: tuple[int, ...]
    method: str
    config: dict
    diagnostics: object | None = field(default=None, compare=False, repr=False)

    @property
    def n_rows(self) -> int:
        return self.row_loadings.shape[0]

    @property
    def n_cols(self) -> int:
        return self.col_loadings.shape[0]

    def reconstruct(self, factors: np.ndarray | None = None) -> np.ndarray:
        """Rebuild real matrices ``sum_l x[t, l] a_l b_l'`` from factors.

        Uses the fitted factor series by default; pass an ``(m, order)``
        complex array to rebuild other time points (e.g. forecasts).
        """
        x = self.factors if factors is None else np.asarray(factors)
        stack = np.einsum("tl,il,jl->tij", x, self.row_loadings, self.col_loadings)
        scale = 1.0 + np.abs(stack.real).max(initial=0.0)
        resid = np.abs(stack.imag).max(initial=0.0)
        if resid > 1e-8 * scale:
            raise ValueError(
                f"reconstruction has imaginary residual {resid:.3e} (scale {scale:.3e})"
            )
        return stack.real

    def to_dict(self) -> dict:
        """JSON-ready form; complex arrays split into re/im parts."""

        def split(mat):
            mat = np.asarray(mat)
            return {"re": mat.real.tolist(), "im": mat.imag.tolist()}

        return {
            "schema_version": 1,
            "d_hat": int(self.order),
            "method": self.method,
            "A": split(self.row_loadings),
            "B": split(self.col_loadings),
            "factors": split(self.factors),
            "eigenvalues": [
                {"re": float(v.real), "im": float(v.imag)} for v in self.eigenvalues
            ],
            "pairs": [[p.left, p.right, p.sign] for p in self.pairs],
            "reals": list(self.real_columns),
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "CPDecomposition":
        def join(obj):
            return np.asarray(obj["re"], dtype=float) + 1j * np.asarray(
                obj["im"], dtype=float
            )

        return cls(
            order=int(payload["d_hat"]),
            row_loadings=join(payload["A"]),
            col_loadings=join(payload["B"]),
            factors=join(payload["factors"]),
            eigenvalues=np.array(
                [complex(v["re"], v["im"]) for v in payload["eigenvalues"]]
            ),
            pairs=tuple(ConjugatePair(int(a), int(b), int(s)) for a, b, s in payload["pairs"]),
            real_columns=tuple(int(i) for i in payload["reals"]),
            method=str(payload["method"]),
            config=dict(payload["config"]),
        )


def component_basis(row_loadings: np.ndarray, col_loadings: np.ndarray) -> np.ndarray:
    """Columnwise Kronecker basis ``(b_l kron a_l)`` of the flattened model."""
    d = row_loadings.shape[1]
    return np.column_stack(
        [np.kron(col_loadings[:, l], row_loadings[:, l]) for l in range(d)]
    )


def recover_factors(
    series, row_loadings: np.ndarray, col_loadings: np.ndarray
) -> np.ndarray:
    """Latent series via the Moore-Penrose inverse of the component basis.

    Raises
    ------
    RankDeficientLoadings
        If the Kronecker basis loses numerical column rank.
    """
    values = check_series_values(series, min_length=1)
    basis = component_basis(row_loadings, col_loadings)
    require_full_column_rank(basis, "component basis")
    pinv = np.linalg.pinv(basis, rcond=pinv_rcond(basis.shape))
    return vec_all(values) @ pinv.T
