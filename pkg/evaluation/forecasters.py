"""
This module defines forecasting tasks and the models that solve them.

A ForecastTask fixes a series, its chronological split and the final
`horizon` steps to forecast. Forecasters are fitted on the task's training
and validation segments and then predict the forecast window in kWh.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Protocol, Tuple

import numpy as np
import pandas as pd

from data.dataset import ClusterSeries
from data.split import SplitSpec, split_bounds
from features.scaler import fit_scaler, scale
from features.windows import FeatureSet, build_windows, feature_matrix, thin_windows
from lstm.forecast import HORIZON_3_DAY, STEPS_PER_DAY, forecast_closed_loop
from lstm.params import init_params
from lstm.serialization import ForecastModel
from training.trainer import TrainConfig, TrainReport, train
from utils.exceptions import ConfigError, DataError


@dataclass(frozen=True)
class ForecastConfig:
    """
    Settings shared by every job of an experiment.

    Attributes:
        train: Training hyperparameters; train.seed also seeds the weights.
        split: Chronological split fractions.
        window: Window length L, also the warmup length.
        hidden_size: LSTM hidden size H.
        time_encoding: 'concat' or 'monotonic'.
        max_windows: Cap on training and validation windows, thinned by a
            fixed stride; None uses every stride-1 window.
    """

    train: TrainConfig = field(default_factory=TrainConfig)
    split: SplitSpec = field(default_factory=SplitSpec)
    window: int = 48
    hidden_size: int = 32
    time_encoding: str = "concat"
    max_windows: Optional[int] = None

    def __post_init__(self) -> None:
        if self.max_windows is not None and self.max_windows < 1:
            raise ConfigError(f"max_windows must be at least 1, got {self.max_windows}")


@dataclass(frozen=True)
class ForecastTask:
    """
    One forecasting problem.

    Attributes:
        series: The cluster series (a month or the whole span).
        config: Experiment settings.
        selector: Feature subset.
        horizon: Steps to forecast at the end of the test segment.
        label: Month label or other scope description for reports.
    """

    series: ClusterSeries
    config: ForecastConfig
    selector: FeatureSet = FeatureSet.ALL
    horizon: int = HORIZON_3_DAY
    label: str = ""

    def __post_init__(self) -> None:
        _, _, test = self.bounds
        if test.stop - test.start < self.horizon:
            raise DataError(
                f"{self.describe()}: test segment has {test.stop - test.start} points, fewer than the "
                f"{self.horizon}-step horizon"
            )

    def describe(self) -> str:
        return f"cluster {self.series.cluster_id} {self.label}".strip()

    @property
    def bounds(self) -> Tuple[slice, slice, slice]:
        try:
            return split_bounds(len(self.series), self.config.split, self.config.window)
        except DataError as e:
            raise DataError(f"{self.describe()}: {e}") from e

    @property
    def forecast_start(self) -> int:
        return len(self.series) - self.horizon

    def actual(self) -> np.ndarray:
        return self.series.consumption[self.forecast_start :]

    def forecast_timestamps(self) -> pd.DatetimeIndex:
        return self.series.timestamps[self.forecast_start :]


class Forecaster(Protocol):
    """Anything that can be fitted on a task and forecast its final window."""

    def fit(self, task: ForecastTask) -> None: ...

    def predict(self, task: ForecastTask) -> np.ndarray: ...


def forecast_with_model(model: ForecastModel, series: ClusterSeries, forecast_start: int, horizon: int) -> np.ndarray:
    """
    Closed-loop forecast of series[forecast_start : forecast_start + horizon].

    The model warms up on the `model.window` observed steps before
    forecast_start; temperature and time features of the forecast window are
    taken from the series.

    Args:
        model: Trained model with its scalers.
        series: Cluster series holding history and exogenous features.
        forecast_start: Index of the first forecast step.
        horizon: Number of steps.

    Returns:
        Forecast kWh.
    """
    if forecast_start < model.window:
        raise DataError(f"forecast start {forecast_start} leaves fewer than {model.window} warmup steps")
    if forecast_start + horizon > len(series):
        raise DataError(f"forecast window ends at {forecast_start + horizon}, beyond the {len(series)}-point series")
    inputs = feature_matrix(
        scale(series.consumption, model.consumption_scaler),
        scale(series.temperature, model.temperature_scaler),
        series.timestamps,
        model.selector,
        model.time_encoding,
    )
    warmup = inputs[forecast_start - model.window : forecast_start]
    future_exogenous = inputs[forecast_start : forecast_start + horizon, 1:]
    return forecast_closed_loop(model.params, warmup, future_exogenous, horizon, model.consumption_scaler)


class LstmForecaster:
    """
    Trains an LSTM on the task's training segment with validation-driven early stopping.
    """

    def __init__(self, config: ForecastConfig) -> None:
        self.config = config
        self.model: Optional[ForecastModel] = None
        self.report: Optional[TrainReport] = None

    def fit(self, task: ForecastTask) -> None:
        """
        Fit scalers on the training segment and train the network.

        Args:
            task: The forecasting task.
        """
        cfg = self.config
        series = task.series
        train_bounds, val_bounds, _ = task.bounds
        consumption_scaler = fit_scaler(series.consumption[train_bounds])
        temperature_scaler = fit_scaler(series.temperature[train_bounds])
        consumption = scale(series.consumption, consumption_scaler)
        temperature = scale(series.temperature, temperature_scaler)

        def windows(bounds: slice):
            cut = build_windows(
                consumption[bounds],
                temperature[bounds],
                series.timestamps[bounds],
                cfg.window,
                task.selector,
                cfg.time_encoding,
            )
            return thin_windows(cut, cfg.max_windows)

        initial = init_params(cfg.hidden_size, task.selector.input_size, cfg.train.seed)
        logging.info(f"Fitting LSTM for {task.describe()} with features {task.selector.value}")
        params, self.report = train(initial, windows(train_bounds), windows(val_bounds), cfg.train)
        self.model = ForecastModel(
            params=params,
            consumption_scaler=consumption_scaler,
            temperature_scaler=temperature_scaler,
            selector=task.selector,
            window=cfg.window,
            time_encoding=cfg.time_encoding,
            cluster_id=series.cluster_id,
        )

    def predict(self, task: ForecastTask) -> np.ndarray:
        if self.model is None:
            raise DataError("LstmForecaster.predict called before fit")
        return forecast_with_model(self.model, task.series, task.forecast_start, task.horizon)


class OracleForecaster:
    """Returns the actual values; every metric of its forecasts is exactly zero."""

    def __init__(self, config: Optional[ForecastConfig] = None) -> None:
        self.config = config

    def fit(self, task: ForecastTask) -> None:
        pass

    def predict(self, task: ForecastTask) -> np.ndarray:
        return task.actual().copy()


class PersistenceForecaster:
    """Seasonal naive baseline: repeats the last observed day across the horizon."""

    def __init__(self, config: Optional[ForecastConfig] = None) -> None:
        self.config = config

    def fit(self, task: ForecastTask) -> None:
        pass

    def predict(self, task: ForecastTask) -> np.ndarray:
        start = task.forecast_start
        last_day = task.series.consumption[start - STEPS_PER_DAY : start]
        return np.resize(last_day, task.horizon)
