"""Command-line interface.

Subcommands bind the library into reproducible workflows: ``simulate``
writes synthetic series, ``estimate`` fits either method and emits the
decomposition as JSON, ``forecast`` extends a series with model-based
predictions, ``benchmark`` runs Monte Carlo grids to CSV, and ``evaluate``
scores estimates or fitted series.

Conventions: stdout carries data, stderr carries logs; exit code 0 on
success, 2 on usage/config errors, 3 on numerical or estimation failures
(with a machine-readable error name on stdout).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys

import numpy as np

from .decomposition import CPDecomposition, recover_factors
from .direct import direct_estimate
from .exceptions import CpmtsError
from .forecast import forecast_matrices
from .metrics import fit_errors, loading_mismatch
from .proxy import make_proxy
from .refined import refined_estimate
from .series import detect_format, load_series, save_series
from .simulation import (
    DGPConfig,
    accuracy_benchmark,
    generate_cp_series,
    rank_selection_benchmark,
    write_benchmark_csv,
)

USAGE_EXIT = 2
FAILURE_EXIT = 3


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpmts",
        description="CP factor modelling and forecasting for matrix time series",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write a synthetic series")
    sim.add_argument("--p", type=int, required=True)
    sim.add_argument("--q", type=int, required=True)
    sim.add_argument("--d", type=int, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--noise", choices=["on", "off"], default="on")
    sim.add_argument("--out", required=True)
    sim.add_argument("--truth", default=None, help="optional ground-truth JSON path")

    est = sub.add_parser("estimate", help="fit a decomposition and emit JSON")
    est.add_argument("--in", dest="input", required=True)
    est.add_argument("--format", choices=["mts-text", "csv-long"], default=None)
    est.add_argument("--method", choices=["direct", "refined"], default="refined")
    est.add_argument("--K", type=int, default=3)
    est.add_argument("--proxy", choices=["pca", "random"], default="pca")
    est.add_argument("--delta1", type=float, default=0.0)
    est.add_argument("--delta2", type=float, default=0.0)
    est.add_argument("--cn", type=float, default=0.0)
    est.add_argument("--alpha", type=float, default=0.5)
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--out", required=True)

    fc = sub.add_parser("forecast", help="h-step-ahead matrix forecasts")
    fc.add_argument("--in", dest="input", required=True)
    fc.add_argument("--format", choices=["mts-text", "csv-long"], default=None)
    fc.add_argument("--estimate", required=True)
    fc.add_argument("--h", dest="horizon", type=int, required=True)
    fc.add_argument("--pmax", type=int, default=5)
    fc.add_argument("--out", required=True)

    bm = sub.add_parser("benchmark", help="Monte Carlo grids to CSV")
    bm.add_argument("--suite", choices=["rank", "accuracy"], required=True)
    bm.add_argument("--grid", required=True, help="CSV with header p,q,d,n")
    bm.add_argument("--reps", type=int, required=True)
    bm.add_argument("--seed", type=int, required=True)
    bm.add_argument("--method", choices=["direct", "refined"], default="refined")
    bm.add_argument("--K", type=int, default=3)
    bm.add_argument("--proxy", choices=["pca", "random"], default="pca")
    bm.add_argument("--jobs", type=int, default=1)
    bm.add_argument("--out", required=True)

    ev = sub.add_parser("evaluate", help="score an estimate or fitted series")
    ev.add_argument("--truth", default=None)
    ev.add_argument("--estimate", default=None)
    ev.add_argument("--actual", default=None)
    ev.add_argument("--fitted", default=None)
    return parser


def _load_input_series(path, fmt):
    if fmt is None:
        fmt = detect_format(path)
    return load_series(path, fmt)


def _load_json(path, what: str) -> dict:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file {path} is not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise UsageError(f"{what} file {path} does not hold a JSON object")
    return payload


def _loadings_from_json(payload, key):
    block = payload[key]
    if isinstance(block, dict):
        return np.asarray(block["re"], float) + 1j * np.asarray(block["im"], float)
    return np.asarray(block, dtype=float)


def _cmd_simulate(args) -> int:
    try:
        config = DGPConfig(
            p=args.p, q=args.q, d=args.d, n=args.n,
            seed=args.seed, noise=args.noise == "on",
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    values, truth = generate_cp_series(config)
    save_series(values, args.out)
    if args.truth:
        payload = {
            "schema_version": 1,
            "A": truth.row_loadings.tolist(),
            "B": truth.col_loadings.tolist(),
            "factors": truth.factors.tolist(),
            "ar_coefficients": truth.ar_coefficients.tolist(),
        }
        with open(args.truth, "w") as fh:
            json.dump(payload, fh)
    print(json.dumps({"written": args.out, "p": args.p, "q": args.q, "n": args.n}))
    return 0


def _cmd_estimate(args) -> int:
    series = _load_input_series(args.input, args.format)
    if args.method == "refined":
        est = refined_estimate(
            series,
            proxy_strategy=args.proxy,
            n_lags=args.K,
            level=args.delta1,
            proj_level=args.delta2,
            ridge=args.cn,
            search_frac=args.alpha,
            seed=args.seed,
        )
    else:
        xi = make_proxy(series.values, args.proxy, args.seed)
        est = direct_estimate(
            series,
            xi,
            level=args.delta1,
            ridge=args.cn,
            search_frac=args.alpha,
            seed=args.seed,
        )
    with open(args.out, "w") as fh:
        json.dump(est.to_dict(), fh)
    print(json.dumps({"written": args.out, "d_hat": est.order, "method": est.method}))
    return 0


def _cmd_forecast(args) -> int:
    if args.horizon < 1:
        raise UsageError("--h must be at least 1")
    series = _load_input_series(args.input, args.format)
    try:
        est = CPDecomposition.from_dict(_load_json(args.estimate, "estimate"))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"estimate file {args.estimate} has a bad schema: {exc}") from None
    if est.n_rows != series.p or est.n_cols != series.q:
        raise UsageError(
            f"estimate is for a {est.n_rows}x{est.n_cols} series, "
            f"input is {series.p}x{series.q}"
        )
    # recover the factor series on the supplied input, so the estimate can
    # drive forecasts of a longer (or different) realization
    refit = dataclasses.replace(
        est, factors=recover_factors(series, est.row_loadings, est.col_loadings)
    )
    result = forecast_matrices(refit, args.horizon, args.pmax)
    save_series(result.matrices, args.out)
    print(json.dumps({"written": args.out, "steps": args.horizon}))
    return 0


def _read_grid(path):
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
                "p", "q", "d", "n",
            ]:
                raise UsageError(f"grid file must have header p,q,d,n: {path}")
            cells = [
                (int(row["p"]), int(row["q"]), int(row["d"]), int(row["n"]))
                for row in reader
            ]
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"malformed grid file {path}: {exc}") from None
    if not cells:
        raise UsageError(f"grid file {path} holds no cells")
    return cells


def _cmd_benchmark(args) -> int:
    cells = _read_grid(args.grid)
    if args.suite == "rank":
        rows = rank_selection_benchmark(
            cells,
            reps=args.reps,
            method=args.method,
            n_lags=args.K,
            proxy=args.proxy,
            seed=args.seed,
            jobs=args.jobs,
        )
    else:
        rows = accuracy_benchmark(
            cells,
            reps=args.reps,
            method=args.method,
            n_lags=args.K,
            proxy=args.proxy,
            seed=args.seed,
            jobs=args.jobs,
        )
    write_benchmark_csv(rows, args.out)
    print(json.dumps({"written": args.out, "cells": len(rows)}))
    return 0


def _cmd_evaluate(args) -> int:
    if args.truth and args.estimate:
        truth = _load_json(args.truth, "truth")
        estimate = _load_json(args.estimate, "estimate")
        try:
            out = {
                "mismatch_A": loading_mismatch(
                    _loadings_from_json(truth, "A"), _loadings_from_json(estimate, "A")
                ),
                "mismatch_B": loading_mismatch(
                    _loadings_from_json(truth, "B"), _loadings_from_json(estimate, "B")
                ),
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"loading schema mismatch: {exc}") from None
    elif args.actual and args.fitted:
        actual = _load_input_series(args.actual, None)
        fitted = _load_input_series(args.fitted, None)
        rmse, mae = fit_errors(actual, fitted)
        out = {"rmse": rmse, "mae": mae}
    else:
        raise UsageError("pass either --truth/--estimate or --actual/--fitted")
    print(json.dumps(out))
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "forecast": _cmd_forecast,
    "benchmark": _cmd_benchmark,
    "evaluate": _cmd_evaluate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except CpmtsError as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}))
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILURE_EXIT


if __name__ == "__main__":
    sys.exit(main())
