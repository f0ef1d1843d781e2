"""
This module reads and writes temperature series.

The CSV layout is `timestamp,celsius`. Hourly series are accepted and
linearly interpolated onto the 30-minute grid.
"""

import io
import logging

import numpy as np
import pandas as pd

from utils.exceptions import DataError
from utils.file_io import atomic_write_text

from .readings import TIMESTAMP_FORMAT, TIMESTAMP_PATTERN

TEMPERATURE_COLUMNS = ["timestamp", "celsius"]


def parse_temperature_csv(path: str) -> pd.Series:
    """
    Read a temperature file and put it on the 30-minute grid.

    Args:
        path: CSV path.

    Returns:
        Series of degrees C indexed by timestamp at 30-minute spacing.
    """
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (IOError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"cannot read temperature file {path}: {e}") from e
    if list(raw.columns) != TEMPERATURE_COLUMNS:
        raise DataError(f"{path}:1: expected header {','.join(TEMPERATURE_COLUMNS)}, got {','.join(raw.columns)}")
    if raw.empty:
        raise DataError(f"{path}: no temperature rows")

    valid_text = raw["timestamp"].str.fullmatch(TIMESTAMP_PATTERN)
    timestamps = pd.to_datetime(raw["timestamp"].where(valid_text), format=TIMESTAMP_FORMAT, errors="coerce")
    celsius = pd.to_numeric(raw["celsius"], errors="coerce")
    bad = timestamps.isna() | celsius.isna() | ~np.isfinite(celsius) | ~timestamps.dt.minute.isin([0, 30])
    if bad.any():
        raise DataError(f"{path}:{int(np.flatnonzero(bad.to_numpy())[0]) + 2}: malformed temperature row")

    series = pd.Series(celsius.to_numpy(dtype=np.float64), index=pd.DatetimeIndex(timestamps), name="celsius")
    if series.index.duplicated().any():
        raise DataError(f"{path}: duplicate timestamp {series.index[series.index.duplicated()][0]}")
    series = series.sort_index()
    gridded = series.resample("30min").asfreq().interpolate(method="linear")
    logging.info(f"Loaded {len(series)} temperature readings from {path} ({len(gridded)} on the 30-minute grid)")
    return gridded


def write_temperature_csv(series: pd.Series, path: str) -> None:
    """Write a temperature series with two-decimal degrees."""
    buffer = io.StringIO()
    frame = pd.DataFrame({"timestamp": series.index, "celsius": series.to_numpy()})
    frame.to_csv(buffer, index=False, float_format="%.2f", date_format=TIMESTAMP_FORMAT, lineterminator="\n")
    atomic_write_text(path, buffer.getvalue())
