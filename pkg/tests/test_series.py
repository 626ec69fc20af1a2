import numpy as np
import pytest

from cpmts.exceptions import NonFiniteEntry, ShapeMismatch
from cpmts.series import (
    MatrixSeries,
    detect_format,
    format_mts_text,
    load_series,
    load_series_with_mask,
    save_series,
)

MTS_SMALL = """MTS v1 2 2 3
1.0 2.0
3.0 4.0

5.0 6.0
7.0 8.0

9.0 10.0
11.0 12.0
"""

CSV_SMALL = "t,i,j,value\n" + "\n".join(
    f"{t},{i},{j},{float((t - 1) * 4 + (i - 1) * 2 + j)}"
    for t in (1, 2, 3)
    for i in (1, 2)
    for j in (1, 2)
)


def test_mts_text_header_and_shape(tmp_path):
    path = tmp_path / "s.mts"
    path.write_text(MTS_SMALL)
    series = load_series(path, "mts-text")
    assert (series.p, series.q, series.n) == (2, 2, 3)
    assert series.values[0, 1, 0] == 3.0
    assert series.values[2, 1, 1] == 12.0


def test_csv_long_equals_mts(tmp_path):
    mts = tmp_path / "s.mts"
    mts.write_text(MTS_SMALL)
    csvf = tmp_path / "s.csv"
    csvf.write_text(CSV_SMALL + "\n")
    a = load_series(mts, "mts-text")
    b = load_series(csvf, "csv-long")
    np.testing.assert_array_equal(a.values, b.values)


def test_round_trip_bit_identical(tmp_path, rng):
    values = rng.standard_normal((5, 3, 4)) / 3.0  # awkward decimals
    path = tmp_path / "rt.mts"
    save_series(values, path)
    loaded = load_series(path, "mts-text")
    assert (loaded.values == values).all()
    assert format_mts_text(loaded.values) == format_mts_text(values)


def test_non_finite_token_rejected(tmp_path):
    path = tmp_path / "bad.mts"
    path.write_text(MTS_SMALL.replace("5.0", "inf"))
    with pytest.raises(NonFiniteEntry):
        load_series(path, "mts-text")
    path.write_text(MTS_SMALL.replace("5.0", "abc"))
    with pytest.raises(NonFiniteEntry):
        load_series(path, "mts-text")


def test_dimension_mismatch(tmp_path):
    path = tmp_path / "bad.mts"
    path.write_text("MTS v1 2 2 3\n1.0 2.0\n3.0 4.0\n")
    with pytest.raises(ShapeMismatch):
        load_series(path, "mts-text")


def test_too_short_series_rejected(tmp_path):
    path = tmp_path / "short.mts"
    path.write_text("MTS v1 1 1 2\n1.0\n\n2.0\n")
    with pytest.raises(ShapeMismatch):
        load_series(path, "mts-text")


def test_csv_missing_value_goes_to_mask(tmp_path):
    text = CSV_SMALL.replace("2,2,2,8.0", "2,2,2,") + "\n"
    path = tmp_path / "miss.csv"
    path.write_text(text)
    with pytest.raises(ShapeMismatch):
        load_series(path, "csv-long")
    series, mask = load_series_with_mask(path, "csv-long")
    assert mask.values.sum() == 1
    assert mask.values[1, 1, 1]
    assert series.values[1, 1, 1] == 0.0


def test_csv_duplicate_rejected(tmp_path):
    path = tmp_path / "dup.csv"
    path.write_text(CSV_SMALL + "\n1,1,1,0.0\n")
    with pytest.raises(ShapeMismatch):
        load_series(path, "csv-long")


def test_detect_format(tmp_path):
    mts = tmp_path / "a.mts"
    mts.write_text(MTS_SMALL)
    csvf = tmp_path / "a.csv"
    csvf.write_text(CSV_SMALL + "\n")
    assert detect_format(mts) == "mts-text"
    assert detect_format(csvf) == "csv-long"
    other = tmp_path / "junk.txt"
    other.write_text("hello\n")
    with pytest.raises(ShapeMismatch):
        detect_format(other)


def test_series_is_immutable(rng):
    series = MatrixSeries(rng.standard_normal((4, 2, 2)))
    with pytest.raises(ValueError):
        series.values[0, 0, 0] = 1.0


def test_nan_values_rejected():
    values = np.ones((4, 2, 2))
    values[1, 0, 1] = np.nan
    with pytest.raises(NonFiniteEntry):
        MatrixSeries(values)
