"""Forecast metrics, forecasters and the experiment harness."""

from .experiments import annual_row, run_annual_15day, run_clusters_3day, run_monthly_3day, run_task
from .forecasters import (
    ForecastConfig,
    Forecaster,
    ForecastTask,
    LstmForecaster,
    OracleForecaster,
    PersistenceForecaster,
    forecast_with_model,
)
from .metrics import ForecastResult, forecast_csv, mape, nrmse_percent, rmse, score_forecast
from .report import REPORT_COLUMNS, ExperimentReport, ReportRow

__all__ = [
    "REPORT_COLUMNS",
    "ExperimentReport",
    "ForecastConfig",
    "ForecastResult",
    "ForecastTask",
    "Forecaster",
    "LstmForecaster",
    "OracleForecaster",
    "PersistenceForecaster",
    "ReportRow",
    "annual_row",
    "forecast_csv",
    "forecast_with_model",
    "mape",
    "nrmse_percent",
    "rmse",
    "run_annual_15day",
    "run_clusters_3day",
    "run_monthly_3day",
    "run_task",
    "score_forecast",
]
