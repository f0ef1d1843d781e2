"""
This module parses and writes smart-meter reading files.

A reading file is a UTF-8 CSV with header `consumer_id,timestamp,kwh`, one
30-minute energy reading per row and timestamps written as YYYY-MM-DDTHH:MM.
Readings are held column-wise in a pandas DataFrame with the columns
consumer_id (str), timestamp (datetime64) and kwh (float64).
"""

import io
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterator, List, Sequence, Union

import numpy as np
import pandas as pd

from utils.exceptions import DataError
from utils.file_io import atomic_write_text

READING_COLUMNS = ["consumer_id", "timestamp", "kwh"]
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M"
TIMESTAMP_PATTERN = r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}"

Source = Union[str, "os.PathLike[str]", IO[str]]


@dataclass(frozen=True)
class MeterReading:
    """
    One smart-meter record.

    Attributes:
        consumer_id: Opaque consumer label.
        timestamp: Start of the 30-minute interval, naive local time.
        kwh: Energy consumed in the interval.
    """

    consumer_id: str
    timestamp: pd.Timestamp
    kwh: float


def iter_readings(readings: pd.DataFrame) -> Iterator[MeterReading]:
    """Yield the rows of a readings frame as MeterReading records."""
    for consumer_id, timestamp, kwh in readings[READING_COLUMNS].itertuples(index=False, name=None):
        yield MeterReading(str(consumer_id), timestamp, float(kwh))


def readings_frame(records: Sequence[MeterReading]) -> pd.DataFrame:
    """Build a readings frame from MeterReading records."""
    return pd.DataFrame(
        {
            "consumer_id": [r.consumer_id for r in records],
            "timestamp": pd.to_datetime([r.timestamp for r in records]),
            "kwh": np.array([r.kwh for r in records], dtype=np.float64),
        }
    )


def _source_name(source: Source) -> str:
    if isinstance(source, (str, os.PathLike)):
        return os.fspath(source)
    return getattr(source, "name", "<stream>")


def _fail(source: str, lines: pd.Series, problem: str) -> None:
    first = int(lines.iloc[0])
    more = f" ({len(lines) - 1} more rows affected)" if len(lines) > 1 else ""
    raise DataError(f"{source}:{first}: {problem}{more}")


def _read_frame(source: Source) -> pd.DataFrame:
    """Parse and validate one file, keeping the source name and line number of every row."""
    name = _source_name(source)
    try:
        raw = pd.read_csv(source, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{name}: file is empty") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataError(f"{name}: malformed CSV: {e}") from e
    if list(raw.columns) != READING_COLUMNS:
        raise DataError(f"{name}:1: expected header {','.join(READING_COLUMNS)}, got {','.join(raw.columns)}")

    lines = pd.Series(np.arange(2, len(raw) + 2), index=raw.index)
    blank = (raw == "").any(axis=1)
    if blank.any():
        _fail(name, lines[blank], "row has an empty field")

    grid_text = raw["timestamp"].str.fullmatch(TIMESTAMP_PATTERN)
    timestamps = pd.to_datetime(raw["timestamp"].where(grid_text), format=TIMESTAMP_FORMAT, errors="coerce")
    if timestamps.isna().any():
        _fail(name, lines[timestamps.isna()], "timestamp is not of the form YYYY-MM-DDTHH:MM")
    off_grid = ~timestamps.dt.minute.isin([0, 30])
    if off_grid.any():
        _fail(name, lines[off_grid], "timestamp is not on the 30-minute grid")

    kwh = pd.to_numeric(raw["kwh"], errors="coerce")
    if kwh.isna().any():
        _fail(name, lines[kwh.isna()], "kwh is not a decimal number")
    if not np.isfinite(kwh).all():
        _fail(name, lines[~np.isfinite(kwh)], "kwh is not finite")
    if (kwh < 0).any():
        _fail(name, lines[kwh < 0], "kwh is negative")

    return pd.DataFrame(
        {
            "consumer_id": raw["consumer_id"],
            "timestamp": timestamps,
            "kwh": kwh.astype(np.float64),
            "source": name,
            "line": lines,
        }
    )


def _check_duplicates(frame: pd.DataFrame) -> None:
    duplicated = frame.duplicated(subset=["consumer_id", "timestamp"], keep=False)
    if not duplicated.any():
        return
    clashes = frame[duplicated].sort_values(["consumer_id", "timestamp", "source", "line"])
    first, second = clashes.iloc[0], clashes.iloc[1]
    raise DataError(
        f"duplicate reading for consumer {first['consumer_id']} at {first['timestamp']:%Y-%m-%dT%H:%M}: "
        f"{first['source']}:{first['line']} and {second['source']}:{second['line']}"
    )


def parse_meter_csv(stream: Source) -> pd.DataFrame:
    """
    Parse one meter reading file.

    Args:
        stream: Path or open text stream of a `consumer_id,timestamp,kwh` CSV.

    Returns:
        Readings frame in file order.

    Raises:
        DataError: On a malformed row, a timestamp off the 30-minute grid, a
            negative reading or a duplicate (consumer, timestamp) pair; the
            message carries the line number(s).
    """
    frame = _read_frame(stream)
    _check_duplicates(frame)
    logging.info(f"Parsed {len(frame)} readings from {_source_name(stream)}")
    return frame[READING_COLUMNS].reset_index(drop=True)


def parse_meter_files(paths: Sequence[str], jobs: int = 1) -> pd.DataFrame:
    """
    Parse several meter files and concatenate them in sorted path order.

    Args:
        paths: Files to read.
        jobs: Number of files parsed concurrently.

    Returns:
        The concatenated readings frame.
    """
    if not paths:
        raise DataError("no meter files given")
    ordered = sorted(os.fspath(p) for p in paths)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        frames: List[pd.DataFrame] = list(pool.map(_read_frame, ordered))
    merged = pd.concat(frames, ignore_index=True)
    _check_duplicates(merged)
    logging.info(f"Parsed {len(merged)} readings from {len(ordered)} files")
    return merged[READING_COLUMNS]


def format_meter_csv(readings: pd.DataFrame) -> str:
    """Render readings in the meter CSV format with four-decimal kWh."""
    buffer = io.StringIO()
    readings[READING_COLUMNS].to_csv(
        buffer, index=False, float_format="%.4f", date_format=TIMESTAMP_FORMAT, lineterminator="\n"
    )
    return buffer.getvalue()


def write_meter_csv(readings: pd.DataFrame, path: str) -> None:
    """
    Write readings to a meter CSV atomically.

    Args:
        readings: Readings frame.
        path: Destination path.
    """
    atomic_write_text(path, format_meter_csv(readings))
    logging.info(f"Wrote {len(readings)} readings to {path}")
