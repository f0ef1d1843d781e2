"""
This module assembles readings into the interval-by-consumer consumption
matrix and removes incomplete time instances.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
import pandas as pd

from utils.exceptions import DataError

INTERVAL = pd.Timedelta(minutes=30)


@dataclass(frozen=True)
class ConsumptionMatrix:
    """
    Energy per interval (rows) and consumer (columns).

    Attributes:
        values: Float array of shape (intervals, consumers); NaN marks an
            absent reading.
        time_index: Timestamp of every row, ascending.
        consumer_ids: Label of every column, ascending.
    """

    values: np.ndarray
    time_index: pd.DatetimeIndex
    consumer_ids: Tuple[str, ...]

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.time_index), len(self.consumer_ids)):
            raise DataError(
                f"matrix shape {self.values.shape} does not match {len(self.time_index)} timestamps "
                f"and {len(self.consumer_ids)} consumers"
            )

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def is_complete(self) -> bool:
        """True when no cell is absent."""
        return not np.isnan(self.values).any()

    def is_uniform(self) -> bool:
        """True when consecutive rows are exactly 30 minutes apart."""
        if len(self.time_index) < 2:
            return True
        return bool((np.diff(self.time_index.asi8) == INTERVAL.value).all())


def _consumer_codes(ids: pd.Series) -> Tuple[np.ndarray, np.ndarray]:
    """Column index of every reading and the sorted consumer labels."""
    if isinstance(ids.dtype, pd.CategoricalDtype):
        ids = ids.cat.remove_unused_categories()
        names = ids.cat.categories.astype(str).to_numpy()
        order = np.argsort(names, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(len(order))
        return rank[ids.cat.codes.to_numpy()], names[order]
    return pd.factorize(ids.astype(str), sort=True)


def build_matrix(readings: pd.DataFrame) -> ConsumptionMatrix:
    """
    Reorganize readings into a consumption matrix.

    Rows are the union of observed timestamps in ascending order and columns
    the consumers sorted by id. Cells without a reading hold NaN until
    drop_incomplete removes their rows.

    Args:
        readings: Readings frame as returned by parse_meter_csv.

    Returns:
        The ConsumptionMatrix.
    """
    if readings.empty:
        raise DataError("cannot build a consumption matrix from zero readings")
    row, time_index = pd.factorize(readings["timestamp"], sort=True)
    col, consumer_ids = _consumer_codes(readings["consumer_id"])
    values = np.full((len(time_index), len(consumer_ids)), np.nan)
    values[row, col] = readings["kwh"].to_numpy(dtype=np.float64)
    matrix = ConsumptionMatrix(
        values=values, time_index=pd.DatetimeIndex(time_index), consumer_ids=tuple(str(c) for c in consumer_ids)
    )
    absent = int(np.isnan(values).sum())
    logging.info(f"Built consumption matrix {matrix.shape[0]}x{matrix.shape[1]} with {absent} absent cells")
    return matrix


def drop_incomplete(m: ConsumptionMatrix) -> Tuple[ConsumptionMatrix, List[pd.Timestamp]]:
    """
    Remove every time instance (row) that lacks a reading for any consumer.

    Args:
        m: Matrix possibly holding absent cells.

    Returns:
        The complete matrix and the removed timestamps.

    Raises:
        DataError: If every row is incomplete.
    """
    incomplete = np.isnan(m.values).any(axis=1)
    if incomplete.all():
        raise DataError(f"all {len(incomplete)} time instances have absent readings")
    removed = list(m.time_index[incomplete])
    if not removed:
        return m, []
    kept = ConsumptionMatrix(
        values=m.values[~incomplete], time_index=m.time_index[~incomplete], consumer_ids=m.consumer_ids
    )
    logging.info(f"Removed {len(removed)} incomplete time instances; matrix is now {kept.shape[0]}x{kept.shape[1]}")
    if not kept.is_uniform():
        logging.warning("Removed time instances lie inside the series; the time grid is no longer uniform")
    return kept, removed
