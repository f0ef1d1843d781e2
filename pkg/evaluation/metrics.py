"""
This module scores forecasts: MAPE, RMSE in kWh and range-normalized RMSE.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from data.readings import TIMESTAMP_FORMAT
from utils.exceptions import MetricError

MAPE_FLOOR_KWH = 1e-6


def _paired(actual: Sequence[float], predicted: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    actual = np.asarray(actual, dtype=np.float64)
    predicted = np.asarray(predicted, dtype=np.float64)
    if actual.shape != predicted.shape or actual.ndim != 1:
        raise MetricError(f"actual and predicted must be 1-D of equal length, got {actual.shape} and {predicted.shape}")
    if actual.size == 0:
        raise MetricError("cannot score empty series")
    return actual, predicted


def mape(actual: Sequence[float], predicted: Sequence[float]) -> float:
    """
    Mean absolute percentage error, 100/n * sum(|a - p| / |a|).

    Args:
        actual: Observed values.
        predicted: Forecast values.

    Returns:
        MAPE in percent.

    Raises:
        MetricError: If any |actual| <= 1e-6, listing the offending indices.
    """
    actual, predicted = _paired(actual, predicted)
    near_zero = np.flatnonzero(np.abs(actual) <= MAPE_FLOOR_KWH)
    if near_zero.size:
        shown = ", ".join(str(i) for i in near_zero[:10])
        more = f" and {near_zero.size - 10} more" if near_zero.size > 10 else ""
        raise MetricError(f"MAPE is undefined: actual values within {MAPE_FLOOR_KWH} of zero at indices {shown}{more}")
    return 100.0 * float(np.mean(np.abs(actual - predicted) / np.abs(actual)))


def rmse(actual: Sequence[float], predicted: Sequence[float]) -> float:
    """Root mean squared error in the units of the series."""
    actual, predicted = _paired(actual, predicted)
    return math.sqrt(float(np.mean((actual - predicted) ** 2)))


def nrmse_percent(actual: Sequence[float], predicted: Sequence[float]) -> float:
    """
    RMSE divided by the range of the actual series, in percent.

    Raises:
        MetricError: If the actual series is constant.
    """
    actual, predicted = _paired(actual, predicted)
    spread = float(actual.max() - actual.min())
    if not spread > 0:
        raise MetricError("normalized RMSE is undefined for a constant actual series")
    return 100.0 * rmse(actual, predicted) / spread


@dataclass(frozen=True)
class ForecastResult:
    """
    A scored forecast.

    Attributes:
        timestamps: Start of every forecast interval.
        predicted: Forecast kWh.
        actual: Observed kWh.
        mape_percent: MAPE.
        rmse_kwh: RMSE in kWh.
        nrmse_percent: Range-normalized RMSE.
        cluster_id: Cluster the series belongs to.
        features: Feature-set label of the model.
    """

    timestamps: pd.DatetimeIndex
    predicted: np.ndarray
    actual: np.ndarray
    mape_percent: float
    rmse_kwh: float
    nrmse_percent: float
    cluster_id: Optional[int] = None
    features: str = ""

    @property
    def horizon(self) -> int:
        return len(self.timestamps)

    def to_csv(self) -> str:
        return forecast_csv(self.timestamps, self.actual, self.predicted)


def forecast_csv(timestamps: pd.DatetimeIndex, actual: Sequence[float], predicted: Sequence[float]) -> str:
    """Render a forecast as CSV with header timestamp,actual_kwh,predicted_kwh."""
    frame = pd.DataFrame(
        {
            "timestamp": pd.DatetimeIndex(timestamps),
            "actual_kwh": np.asarray(actual, dtype=np.float64),
            "predicted_kwh": np.asarray(predicted, dtype=np.float64),
        }
    )
    return frame.to_csv(index=False, lineterminator="\n", date_format=TIMESTAMP_FORMAT)


def score_forecast(
    timestamps: pd.DatetimeIndex,
    actual: Sequence[float],
    predicted: Sequence[float],
    cluster_id: Optional[int] = None,
    features: str = "",
) -> ForecastResult:
    """
    Compute every metric of a forecast.

    Args:
        timestamps: Forecast interval starts.
        actual: Observed kWh.
        predicted: Forecast kWh.
        cluster_id: Cluster label carried into the result.
        features: Feature-set label carried into the result.

    Returns:
        The ForecastResult.
    """
    actual, predicted = _paired(actual, predicted)
    if len(timestamps) != len(actual):
        raise MetricError(f"{len(timestamps)} timestamps for {len(actual)} forecast values")
    return ForecastResult(
        timestamps=pd.DatetimeIndex(timestamps),
        predicted=predicted,
        actual=actual,
        mape_percent=mape(actual, predicted),
        rmse_kwh=rmse(actual, predicted),
        nrmse_percent=nrmse_percent(actual, predicted),
        cluster_id=cluster_id,
        features=features,
    )
