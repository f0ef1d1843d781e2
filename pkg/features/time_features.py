"""
This module encodes calendar time into the single-number time feature.

Each day of the week gets a code from 1 (Sunday) to 7 (Saturday) and each
half-hour of the day an interval index from 1 (00:00) to 48 (23:30). The time
feature appends the interval index to the day code and divides the result by
748, the largest value (Saturday 23:30).
"""

import datetime
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import pandas as pd

from utils.exceptions import DataError

INTERVALS_PER_DAY = 48
DAYS_PER_WEEK = 7
CONCAT_MAX = 748
MONOTONIC_MAX = DAYS_PER_WEEK * INTERVALS_PER_DAY

TIME_ENCODINGS = ("concat", "monotonic")


@dataclass(frozen=True)
class TimeStamp:
    """
    A half-hour slot on the calendar.

    Attributes:
        date: Calendar date.
        interval: Half-hour index k in 1..48.
        day: Day-of-week code d in 1..7, Sunday = 1 and Saturday = 7.
    """

    date: datetime.date
    interval: int
    day: int

    @classmethod
    def from_datetime(cls, moment: datetime.datetime) -> "TimeStamp":
        """
        Build a TimeStamp from a naive local datetime on the 30-minute grid.

        Args:
            moment: The start of the half-hour interval.

        Returns:
            The matching TimeStamp.
        """
        return cls(
            date=moment.date(),
            interval=interval_of_clock(moment.hour, moment.minute),
            day=day_code(moment.date()),
        )

    def feature(self, encoding: str = "concat") -> float:
        """Return the encoded time feature of this slot."""
        if encoding == "monotonic":
            return encode_time_monotonic(self.day, self.interval)
        return encode_time(self.day, self.interval)


def day_code(date: datetime.date) -> int:
    """
    Map a date to its day-of-week code.

    Args:
        date: Any calendar date.

    Returns:
        1 for Sunday, 2..6 for Monday..Friday and 7 for Saturday.
    """
    # weekday(): Monday = 0 ... Sunday = 6
    return (date.weekday() + 1) % 7 + 1


def interval_of_clock(hh: int, mm: int) -> int:
    """
    Map a clock time to its half-hour interval index.

    Args:
        hh: Hour 0..23.
        mm: Minute, 0 or 30.

    Returns:
        k = 2·hh + mm/30 + 1, so 00:00 is 1 and 23:30 is 48.

    Raises:
        DataError: If the time is not on the 30-minute grid.
    """
    if not 0 <= hh <= 23:
        raise DataError(f"hour {hh} is outside 0..23")
    if mm not in (0, 30):
        raise DataError(f"minute {mm} is not on the 30-minute grid")
    return 2 * hh + mm // 30 + 1


def _check_slot(d: int, k: int) -> None:
    if not 1 <= d <= DAYS_PER_WEEK:
        raise DataError(f"day code {d} is outside 1..7")
    if not 1 <= k <= INTERVALS_PER_DAY:
        raise DataError(f"interval {k} is outside 1..48")


def encode_time(d: int, k: int) -> float:
    """
    Encode a (day code, interval) pair by decimal concatenation.

    The interval index is appended to the day code as digits (318 for day 3,
    interval 18; 32 for day 3, interval 2) and the number is divided by 748.

    Args:
        d: Day code 1..7.
        k: Interval index 1..48.

    Returns:
        A value in (0, 1]; exactly 1.0 for Saturday 23:30.
    """
    _check_slot(d, k)
    concat = d * 10 + k if k < 10 else d * 100 + k
    return concat / CONCAT_MAX


def encode_time_monotonic(d: int, k: int) -> float:
    """
    Encode a (day code, interval) pair as ((d - 1)·48 + k) / 336.

    Ablation alternative to encode_time that increases by one step per
    half-hour through the week.
    """
    _check_slot(d, k)
    return ((d - 1) * INTERVALS_PER_DAY + k) / MONOTONIC_MAX


def time_feature_series(
    timestamps: Union[pd.DatetimeIndex, Sequence[datetime.datetime]], encoding: str = "concat"
) -> np.ndarray:
    """
    Encode a whole series of timestamps.

    Args:
        timestamps: Naive local timestamps on the 30-minute grid.
        encoding: 'concat' (default) or 'monotonic'.

    Returns:
        A float64 array of time features, one per timestamp.
    """
    if encoding not in TIME_ENCODINGS:
        raise DataError(f"unknown time encoding '{encoding}', expected one of {TIME_ENCODINGS}")
    index = pd.DatetimeIndex(timestamps)
    minutes = index.minute.to_numpy()
    if np.any((minutes != 0) & (minutes != 30)) or np.any(index.second.to_numpy() != 0):
        raise DataError("timestamps must lie on the 30-minute grid")
    d = (index.dayofweek.to_numpy() + 1) % 7 + 1
    k = 2 * index.hour.to_numpy() + minutes // 30 + 1
    if encoding == "monotonic":
        return ((d - 1) * INTERVALS_PER_DAY + k) / MONOTONIC_MAX
    concat = np.where(k < 10, d * 10 + k, d * 100 + k)
    return concat / CONCAT_MAX
