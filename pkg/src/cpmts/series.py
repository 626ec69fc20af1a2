"""Matrix-series container and file formats.

Two on-disk formats are supported:

* ``mts-text``: line 1 is ``MTS v1 <p> <q> <n>``, followed by ``n`` slices of
  ``p`` lines with ``q`` whitespace-separated decimals each, slices separated
  by one blank line.  Values are written in shortest round-tripping decimal
  form so ``load(save(series))`` is bit-identical.
* ``csv-long``: header ``t,i,j,value`` with 1-based indices.  An empty value
  field marks a missing entry and populates a :class:`SeriesMask`.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import NonFiniteEntry, ShapeMismatch
from .validation import check_series_values


@dataclass(frozen=True)
class MatrixSeries:
    """An ordered sequence of ``n`` real ``p x q`` observation matrices.

    The backing array is made read-only on construction, so instances are
    safe to share across threads.  The container accepts any ``n >= 1``
    (forecast outputs can be short); estimation entry points enforce the
    ``n >= 3`` needed for lags 1 and 2.
    """

    values: np.ndarray  # (n, p, q)

    def __post_init__(self):
        values = check_series_values(self.values, min_length=1)
        values = np.ascontiguousarray(values)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @property
    def q(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class SeriesMask:
    """Boolean flags marking the missing entries of a series, ``(n, p, q)``."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=bool)
        if values.ndim != 3:
            raise ShapeMismatch(f"mask must be (n, p, q), got shape {values.shape}")
        values = np.ascontiguousarray(values)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def any(self) -> bool:
        return bool(self.values.any())


def _parse_float(token: str, where: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise NonFiniteEntry(f"non-numeric token {token!r} {where}") from None
    if not np.isfinite(value):
        raise NonFiniteEntry(f"non-finite value {token!r} {where}")
    return value


def _load_mts_text(text: str) -> MatrixSeries:
    lines = text.splitlines()
    if not lines:
        raise ShapeMismatch("empty mts-text file")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "MTS" or header[1] != "v1":
        raise ShapeMismatch(f"bad mts-text header: {lines[0]!r}")
    try:
        p, q, n = (int(tok) for tok in header[2:])
    except ValueError:
        raise ShapeMismatch(f"bad mts-text header: {lines[0]!r}") from None

    rows = [ln for ln in lines[1:] if ln.strip()]
    if len(rows) != n * p:
        raise ShapeMismatch(
            f"expected {n * p} data rows for p={p}, n={n}, found {len(rows)}"
        )
    values = np.empty((n, p, q))
    for r, line in enumerate(rows):
        tokens = line.split()
        if len(tokens) != q:
            raise ShapeMismatch(
                f"row {r + 1} has {len(tokens)} values, expected q={q}"
            )
        t, i = divmod(r, p)
        for j, tok in enumerate(tokens):
            values[t, i, j] = _parse_float(tok, f"at slice {t + 1}, row {i + 1}")
    return MatrixSeries(values)


def _load_csv_long(text: str):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ShapeMismatch("empty csv-long file") from None
    if [h.strip() for h in header] != ["t", "i", "j", "value"]:
        raise ShapeMismatch(f"bad csv-long header: {header!r}")

    entries = {}
    for row in reader:
        if not row:
            continue
        if len(row) != 4:
            raise ShapeMismatch(f"csv-long row has {len(row)} fields: {row!r}")
        try:
            t, i, j = int(row[0]), int(row[1]), int(row[2])
        except ValueError:
            raise ShapeMismatch(f"non-integer index in row {row!r}") from None
        if min(t, i, j) < 1:
            raise ShapeMismatch(f"indices are 1-based, got row {row!r}")
        key = (t, i, j)
        if key in entries:
            raise ShapeMismatch(f"duplicate entry for (t,i,j)={key}")
        token = row[3].strip()
        entries[key] = None if token == "" else _parse_float(token, f"at {key}")

    if not entries:
        raise ShapeMismatch("csv-long file holds no data rows")
    n = max(k[0] for k in entries)
    p = max(k[1] for k in entries)
    q = max(k[2] for k in entries)
    if len(entries) != n * p * q:
        raise ShapeMismatch(
            f"csv-long file covers {len(entries)} cells, expected {n * p * q}"
        )
    values = np.zeros((n, p, q))
    mask = np.zeros((n, p, q), dtype=bool)
    for (t, i, j), value in entries.items():
        if value is None:
            mask[t - 1, i - 1, j - 1] = True
        else:
            values[t - 1, i - 1, j - 1] = value
    return MatrixSeries(values), SeriesMask(mask)


def load_series_with_mask(path, fmt: str = "csv-long", min_length: int = 3):
    """Load a series along with the mask of missing entries.

    Missing entries (empty value fields in csv-long) are zero-filled in the
    returned series and flagged in the mask, pending imputation.  mts-text
    cannot encode missing values, so its mask is always empty.
    """
    text = Path(path).read_text()
    if fmt == "csv-long":
        series, mask = _load_csv_long(text)
    elif fmt == "mts-text":
        series = _load_mts_text(text)
        mask = SeriesMask(np.zeros(series.values.shape, dtype=bool))
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if series.n < min_length:
        raise ShapeMismatch(
            f"series holds {series.n} observations, need at least {min_length}"
        )
    return series, mask


def load_series(path, fmt: str = "mts-text", min_length: int = 3) -> MatrixSeries:
    """Load and validate a :class:`MatrixSeries` from ``path``.

    Parameters
    ----------
    path : path-like
        File to read.
    fmt : {"mts-text", "csv-long"}
        On-disk format; see the module docstring.
    min_length : int
        Fewest observations accepted; the default suits estimation inputs,
        pass 1 when reading forecast outputs.

    Raises
    ------
    ShapeMismatch
        Malformed header, wrong row counts, too few observations, or
        (csv-long) missing entries; a file with holes must go through
        :func:`load_series_with_mask`.
    NonFiniteEntry
        Non-numeric tokens or NaN/Inf values.
    """
    series, mask = load_series_with_mask(path, fmt, min_length)
    if mask.any():
        raise ShapeMismatch(
            "series has missing entries; load with load_series_with_mask"
        )
    return series


def detect_format(path) -> str:
    """Guess the on-disk format from the first line of ``path``."""
    with open(path) as fh:
        first = fh.readline()
    if first.startswith("MTS v1 "):
        return "mts-text"
    if [tok.strip() for tok in first.strip().split(",")] == ["t", "i", "j", "value"]:
        return "csv-long"
    raise ShapeMismatch(f"cannot detect series format of {path}")


def format_mts_text(values) -> str:
    values = check_series_values(values, min_length=1)
    n, p, q = values.shape
    out = [f"MTS v1 {p} {q} {n}"]
    for t in range(n):
        for i in range(p):
            out.append(" ".join(repr(float(v)) for v in values[t, i]))
        out.append("")
    return "\n".join(out)


def save_series(series, path) -> None:
    """Write a series to ``path`` in mts-text form with full precision."""
    Path(path).write_text(format_mts_text(series))
