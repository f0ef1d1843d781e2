"""
This module splits a series chronologically into training, validation and test segments.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Sequence, Tuple, TypeVar

from utils.exceptions import ConfigError, DataError

T = TypeVar("T")


@dataclass(frozen=True)
class SplitSpec:
    """
    Fractions of a series given to each segment, in chronological order.

    The stated ratio of 70, 10 and 10 does not add up to a whole; the default
    keeps the training and validation shares and gives the rest to testing.
    """

    train_frac: float = 0.7
    val_frac: float = 0.1
    test_frac: float = 0.2

    def __post_init__(self) -> None:
        fractions = (self.train_frac, self.val_frac, self.test_frac)
        if any(not f > 0 for f in fractions):
            raise ConfigError(f"split fractions must all be positive, got {fractions}")
        if abs(sum(fractions) - 1.0) > 1e-9:
            raise ConfigError(f"split fractions must sum to 1, got {sum(fractions)}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def split_bounds(n: int, spec: SplitSpec, window: int) -> Tuple[slice, slice, slice]:
    """
    Compute the segment boundaries for a series of length n.

    The training and validation sizes are floor(frac * n); the test segment
    receives the remainder.

    Args:
        n: Series length.
        spec: Split fractions.
        window: Window length L; every segment needs at least L + 1 points.

    Returns:
        Slices of the training, validation and test segments.

    Raises:
        DataError: If any segment is shorter than L + 1.
    """
    n_train = math.floor(spec.train_frac * n + 1e-9)
    n_val = math.floor(spec.val_frac * n + 1e-9)
    n_test = n - n_train - n_val
    for name, size in (("training", n_train), ("validation", n_val), ("test", n_test)):
        if size < window + 1:
            raise DataError(
                f"{name} segment of a {n}-point series has {size} points, fewer than window length + 1 = {window + 1}"
            )
    return slice(0, n_train), slice(n_train, n_train + n_val), slice(n_train + n_val, n)


def _take(series: Sequence[T], bounds: slice) -> Sequence[T]:
    if hasattr(series, "iloc"):
        return series.iloc[bounds]
    return series[bounds]


def split_chrono(
    series: Sequence[T], spec: SplitSpec, window: int = 48
) -> Tuple[Sequence[T], Sequence[T], Sequence[T]]:
    """
    Split a series into contiguous training, validation and test segments.

    Args:
        series: Any sliceable series (list, numpy array, pandas Series).
        spec: Split fractions.
        window: Window length L.

    Returns:
        The three segments; concatenated they reproduce the input.
    """
    train, val, test = split_bounds(len(series), spec, window)
    return _take(series, train), _take(series, val), _take(series, test)
