"""
This module turns aligned consumption, temperature and time series into
supervised sliding windows.
"""

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from utils.exceptions import DataError

from .time_features import time_feature_series


class FeatureSet(str, enum.Enum):
    """Which features enter the model next to the historic consumption."""

    CONSUMPTION_TEMPERATURE = "consumption+temperature"
    CONSUMPTION_TIME = "consumption+time"
    ALL = "all"

    @property
    def uses_temperature(self) -> bool:
        return self in (FeatureSet.CONSUMPTION_TEMPERATURE, FeatureSet.ALL)

    @property
    def uses_time(self) -> bool:
        return self in (FeatureSet.CONSUMPTION_TIME, FeatureSet.ALL)

    @property
    def input_size(self) -> int:
        return 1 + int(self.uses_temperature) + int(self.uses_time)

    @property
    def label(self) -> str:
        """Short label used in report tables."""
        return {"consumption+temperature": "2:temp", "consumption+time": "2:time", "all": "3"}[self.value]


@dataclass(frozen=True)
class FeatureWindow:
    """
    One training example.

    Attributes:
        inputs: Array of shape (L, D); columns are normalized consumption,
            then normalized temperature and/or time feature as selected.
        targets: Array of shape (L,); targets[t] is the normalized consumption
            one step after inputs[t].
    """

    inputs: np.ndarray
    targets: np.ndarray

    @property
    def length(self) -> int:
        return self.inputs.shape[0]


def exogenous_matrix(
    temperature: Sequence[float],
    timestamps: pd.DatetimeIndex,
    selector: FeatureSet,
    time_encoding: str = "concat",
) -> np.ndarray:
    """
    Stack the selected exogenous channels.

    Args:
        temperature: Normalized temperature per step.
        timestamps: Timestamp per step.
        selector: Feature subset.
        time_encoding: 'concat' or 'monotonic'.

    Returns:
        Array of shape (N, D - 1).
    """
    columns = []
    if selector.uses_temperature:
        columns.append(np.asarray(temperature, dtype=np.float64))
    if selector.uses_time:
        columns.append(time_feature_series(timestamps, time_encoding))
    return np.column_stack(columns)


def feature_matrix(
    consumption: Sequence[float],
    temperature: Sequence[float],
    timestamps: Sequence,
    selector: FeatureSet,
    time_encoding: str = "concat",
) -> np.ndarray:
    """
    Build the per-step input vectors of a whole series.

    Args:
        consumption: Normalized consumption per step.
        temperature: Normalized temperature per step.
        timestamps: Timestamp per step.
        selector: Feature subset.
        time_encoding: 'concat' or 'monotonic'.

    Returns:
        Array of shape (N, D) with consumption in column 0.
    """
    consumption = np.asarray(consumption, dtype=np.float64)
    index = pd.DatetimeIndex(timestamps)
    if not len(consumption) == len(temperature) == len(index):
        raise DataError(
            f"series are not aligned: {len(consumption)} consumption, {len(temperature)} temperature, "
            f"{len(index)} timestamps"
        )
    exogenous = exogenous_matrix(temperature, index, selector, time_encoding)
    return np.column_stack([consumption, exogenous])


def build_windows(
    consumption: Sequence[float],
    temperature: Sequence[float],
    timestamps: Sequence,
    L: int,
    selector: FeatureSet,
    time_encoding: str = "concat",
) -> List[FeatureWindow]:
    """
    Cut aligned series into stride-1 sliding windows.

    Args:
        consumption: Normalized consumption per step.
        temperature: Normalized temperature per step.
        timestamps: Timestamp per step.
        L: Window length.
        selector: Feature subset.
        time_encoding: 'concat' or 'monotonic'.

    Returns:
        N - L windows for series of length N.

    Raises:
        DataError: If the series are shorter than L + 1 or misaligned.
    """
    if L < 1:
        raise DataError(f"window length must be at least 1, got {L}")
    n = len(consumption)
    if n < L + 1:
        raise DataError(f"series of length {n} is shorter than window length + 1 = {L + 1}")
    inputs = feature_matrix(consumption, temperature, timestamps, selector, time_encoding)
    target = inputs[:, 0]
    return [FeatureWindow(inputs=inputs[s : s + L], targets=target[s + 1 : s + L + 1]) for s in range(n - L)]


def thin_windows(windows: Sequence[FeatureWindow], limit: Optional[int]) -> List[FeatureWindow]:
    """
    Keep at most `limit` windows, evenly spaced by a fixed stride.

    The first window is always kept. None keeps every window.
    """
    if limit is None or len(windows) <= limit:
        return list(windows)
    if limit < 1:
        raise DataError(f"window limit must be at least 1, got {limit}")
    stride = math.ceil(len(windows) / limit)
    return list(windows[::stride])


def stack_windows(windows: Sequence[FeatureWindow]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Stack windows into batch arrays.

    Returns:
        Inputs of shape (N, L, D) and targets of shape (N, L).
    """
    if not windows:
        raise DataError("no windows to stack")
    return np.stack([w.inputs for w in windows]), np.stack([w.targets for w in windows])
