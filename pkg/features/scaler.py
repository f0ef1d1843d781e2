"""
This module implements min-max scaling of the consumption and temperature channels.
"""

from dataclasses import dataclass
from typing import Any, Dict, Sequence, Union

import numpy as np

from utils.exceptions import DataError

Numeric = Union[float, np.ndarray]


@dataclass(frozen=True)
class ScalerParams:
    """
    Min-max scaling bounds for one channel, fitted on training data only.

    Attributes:
        min: Smallest training value.
        max: Largest training value.
    """

    min: float
    max: float

    def to_dict(self) -> Dict[str, Any]:
        return {"min": self.min, "max": self.max}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScalerParams":
        params = cls(min=float(data["min"]), max=float(data["max"]))
        if not params.max > params.min:
            raise DataError(f"scaler max {params.max} must exceed min {params.min}")
        return params

    @classmethod
    def identity(cls) -> "ScalerParams":
        """Scaler that leaves values unchanged."""
        return cls(min=0.0, max=1.0)


def fit_scaler(series: Sequence[float]) -> ScalerParams:
    """
    Record the range of a training series.

    Args:
        series: Non-empty training values.

    Returns:
        The fitted ScalerParams.

    Raises:
        DataError: If the series is empty, non-finite or constant.
    """
    values = np.asarray(series, dtype=np.float64)
    if values.size == 0:
        raise DataError("cannot fit a scaler on an empty series")
    if not np.all(np.isfinite(values)):
        raise DataError("cannot fit a scaler on a series with non-finite values")
    low, high = float(values.min()), float(values.max())
    if not high > low:
        raise DataError(f"cannot fit a scaler on a constant series (value {low})")
    return ScalerParams(min=low, max=high)


def scale(x: Numeric, s: ScalerParams) -> Numeric:
    """
    Map x to (x - min) / (max - min). Values outside the fitted range are not clipped.
    """
    return (x - s.min) / (s.max - s.min)


def unscale(y: Numeric, s: ScalerParams) -> Numeric:
    """Inverse of scale."""
    return y * (s.max - s.min) + s.min
