"""Hand-built decompositions with AR-structured factors for forecast tests."""

import numpy as np

from cpmts.decomposition import ConjugatePair, CPDecomposition


def _ar1(rng, phi, n, burn=100):
    x = np.empty(n + burn)
    prev = 0.0
    for innov_t, t in zip(rng.standard_normal(n + burn), range(n + burn)):
        prev = phi * prev + innov_t
        x[t] = prev
    return x[burn:]


def real_decomposition(n=100, seed=0, p=4, q=3):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(p)
    a = a / np.linalg.norm(a)
    b = rng.standard_normal(q)
    b = b / np.linalg.norm(b)
    x = _ar1(rng, 0.7, n)
    return CPDecomposition(
        order=1,
        row_loadings=a[:, None].astype(complex),
        col_loadings=b[:, None].astype(complex),
        factors=x[:, None].astype(complex),
        eigenvalues=np.array([0.7 + 0j]),
        pairs=(),
        real_columns=(0,),
        method="direct",
        config={},
    )


def pair_decomposition(n=100, seed=0, p=5, q=4):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(p) + 1j * rng.standard_normal(p)
    a = a / np.linalg.norm(a)
    b = rng.standard_normal(q) + 1j * rng.standard_normal(q)
    b = b / np.linalg.norm(b)
    a_r = rng.standard_normal(p)
    a_r = a_r / np.linalg.norm(a_r)
    b_r = rng.standard_normal(q)
    b_r = b_r / np.linalg.norm(b_r)
    z = _ar1(rng, 0.6, n) + 1j * _ar1(rng, -0.8, n)
    x_real = _ar1(rng, 0.5, n)

    row = np.column_stack([a, np.conj(a), a_r])
    col = np.column_stack([b, np.conj(b), b_r])
    factors = np.column_stack([z, np.conj(z), x_real.astype(complex)])
    return CPDecomposition(
        order=3,
        row_loadings=row,
        col_loadings=col,
        factors=factors,
        eigenvalues=np.array([0.6 + 0.8j, 0.6 - 0.8j, 0.5]),
        pairs=(ConjugatePair(0, 1, 1),),
        real_columns=(2,),
        method="refined",
        config={},
    )
