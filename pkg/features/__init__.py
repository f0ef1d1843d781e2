"""Feature engineering: time feature, min-max scaling and sliding windows."""

from .scaler import ScalerParams, fit_scaler, scale, unscale
from .time_features import (
    TimeStamp,
    day_code,
    encode_time,
    encode_time_monotonic,
    interval_of_clock,
    time_feature_series,
)
from .windows import FeatureSet, FeatureWindow, build_windows, feature_matrix, stack_windows, thin_windows

__all__ = [
    "FeatureSet",
    "FeatureWindow",
    "ScalerParams",
    "TimeStamp",
    "build_windows",
    "day_code",
    "encode_time",
    "encode_time_monotonic",
    "feature_matrix",
    "fit_scaler",
    "interval_of_clock",
    "scale",
    "stack_windows",
    "thin_windows",
    "time_feature_series",
    "unscale",
]
