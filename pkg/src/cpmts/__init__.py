"""CP factor modelling for matrix-valued time series.

One-pass estimation of a sum-of-rank-one (CP) structure from the serial
dependence of a ``p x q`` matrix series, with order selection, latent-series
recovery, AR-based forecasting, and Monte Carlo benchmark harnesses.
"""

from . import exceptions
from .covariance import (
    LagCovariance,
    hard_threshold,
    lag_covariance,
    projected_lag_covariance,
    streamed_projected_lag_covariance,
)
from .decomposition import ConjugatePair, CPDecomposition, recover_factors
from .direct import TruncatedPencil, build_pencil, direct_estimate, solve_pencil
from .factors import RealifiedFactors, pair_conjugates, realify, recombine
from .forecast import ARModel, ForecastResult, ar_forecast, fit_ar_aic, forecast_matrices
from .metrics import (
    RollingForecastResult,
    fit_errors,
    loading_mismatch,
    rolling_forecast_eval,
)
from .model import CPFactorModel
from .preprocessing import (
    MatrixStandardizer,
    destandardize,
    impute_missing,
    standardize,
)
from .proxy import ProxySeries, make_proxy, pca_proxy, random_proxy
from .rank import (
    RankDiagnostics,
    eigenvalue_ratio_rank,
    lag_product_matrices,
    preferred_rank_source,
)
from .refined import Projection, project_series, refined_estimate
from .series import (
    MatrixSeries,
    SeriesMask,
    detect_format,
    load_series,
    load_series_with_mask,
    save_series,
)
from .simulation import (
    DGPConfig,
    GroundTruth,
    accuracy_benchmark,
    generate_cp_series,
    rank_selection_benchmark,
)

__version__ = "0.1.0"

__all__ = [
    "ARModel",
    "CPDecomposition",
    "CPFactorModel",
    "ConjugatePair",
    "DGPConfig",
    "ForecastResult",
    "GroundTruth",
    "LagCovariance",
    "MatrixSeries",
    "MatrixStandardizer",
    "Projection",
    "ProxySeries",
    "RankDiagnostics",
    "RealifiedFactors",
    "RollingForecastResult",
    "SeriesMask",
    "TruncatedPencil",
    "accuracy_benchmark",
    "ar_forecast",
    "build_pencil",
    "destandardize",
    "detect_format",
    "direct_estimate",
    "eigenvalue_ratio_rank",
    "exceptions",
    "fit_ar_aic",
    "fit_errors",
    "forecast_matrices",
    "generate_cp_series",
    "hard_threshold",
    "impute_missing",
    "lag_covariance",
    "lag_product_matrices",
    "loading_mismatch",
    "load_series",
    "load_series_with_mask",
    "make_proxy",
    "pair_conjugates",
    "pca_proxy",
    "preferred_rank_source",
    "project_series",
    "projected_lag_covariance",
    "random_proxy",
    "rank_selection_benchmark",
    "realify",
    "recombine",
    "recover_factors",
    "refined_estimate",
    "rolling_forecast_eval",
    "save_series",
    "solve_pencil",
    "standardize",
    "streamed_projected_lag_covariance",
]
