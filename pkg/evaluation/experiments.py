"""
This module runs the forecasting experiments.

- monthly 3-day: one cluster, every month, several feature sets;
- clusters 3-day: the remaining clusters in selected months, all features;
- annual 15-day: one cluster trained on the whole year.

Jobs are independent and may run concurrently; results are always assembled
in job order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

from data.dataset import Dataset
from features.windows import FeatureSet
from lstm.forecast import HORIZON_3_DAY, HORIZON_15_DAY, STEPS_PER_DAY
from utils.exceptions import DataError, MetricError

from .forecasters import ForecastConfig, Forecaster, ForecastTask, LstmForecaster
from .metrics import ForecastResult, score_forecast
from .report import ExperimentReport, ReportRow

ForecasterFactory = Callable[[ForecastConfig], Forecaster]

MIN_ANNUAL_DAYS = 330


def run_task(task: ForecastTask, factory: ForecasterFactory) -> ForecastResult:
    """
    Fit a fresh forecaster on a task and score its forecast.

    Args:
        task: The forecasting task.
        factory: Builds the forecaster from the experiment config.

    Returns:
        The scored ForecastResult.
    """
    forecaster = factory(task.config)
    forecaster.fit(task)
    predicted = forecaster.predict(task)
    try:
        result = score_forecast(
            task.forecast_timestamps(),
            task.actual(),
            predicted,
            cluster_id=task.series.cluster_id,
            features=task.selector.label,
        )
    except MetricError as e:
        raise MetricError(f"{task.describe()} ({task.selector.value}): {e}") from e
    logging.info(
        f"{task.describe()} [{task.selector.label}]: MAPE {result.mape_percent:.3f}%, "
        f"RMSE {result.rmse_kwh:.4f} kWh, nRMSE {result.nrmse_percent:.3f}%"
    )
    return result


def _run_all(tasks: Sequence[ForecastTask], factory: ForecasterFactory, jobs: int) -> List[ForecastResult]:
    if jobs <= 1:
        return [run_task(task, factory) for task in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda task: run_task(task, factory), tasks))


def _row(scope: str, task: ForecastTask, result: ForecastResult) -> ReportRow:
    return ReportRow(
        scope=scope,
        month=task.label,
        cluster=task.series.cluster_id,
        features=task.selector.label,
        mape_percent=result.mape_percent,
        rmse_kwh=result.rmse_kwh,
        nrmse_percent=result.nrmse_percent,
    )


def _month_tasks(
    dataset: Dataset,
    cluster_id: int,
    months: Optional[Sequence[str]],
    selectors: Sequence[FeatureSet],
    cfg: ForecastConfig,
) -> List[ForecastTask]:
    series = dataset.cluster_series(cluster_id)
    tasks = []
    for month in months if months is not None else series.months():
        segment = series.month(month)
        try:
            month_tasks = [ForecastTask(segment, cfg, selector, HORIZON_3_DAY, month) for selector in selectors]
        except DataError:
            if months is not None:
                raise
            logging.warning(
                f"Skipping month {month} of cluster {cluster_id}: too short for a {HORIZON_3_DAY}-step test"
            )
            continue
        tasks += month_tasks
    if not tasks:
        raise DataError(f"no month of cluster {cluster_id} is long enough for a 3-day forecast")
    return tasks


def run_monthly_3day(
    dataset: Dataset,
    cluster_id: int,
    feature_selectors: Sequence[FeatureSet],
    cfg: ForecastConfig,
    months: Optional[Sequence[str]] = None,
    forecaster_factory: ForecasterFactory = LstmForecaster,
    jobs: int = 1,
) -> ExperimentReport:
    """
    Forecast the last 3 days of every month of one cluster.

    Each month is split chronologically, a model is trained per feature set
    and the final 144 steps of the test segment are forecast closed-loop.

    Args:
        dataset: Cleaned dataset.
        cluster_id: Cluster to forecast.
        feature_selectors: Feature sets to compare.
        cfg: Experiment settings.
        months: YYYY-MM labels; all months long enough when omitted.
        forecaster_factory: Builds a forecaster per job.
        jobs: Concurrent jobs.

    Returns:
        One row per (month, feature set) plus per-feature-set averages.
    """
    tasks = _month_tasks(dataset, cluster_id, months, feature_selectors, cfg)
    results = _run_all(tasks, forecaster_factory, jobs)
    return ExperimentReport("monthly-3day", [_row("monthly", t, r) for t, r in zip(tasks, results)])


def run_clusters_3day(
    dataset: Dataset,
    months: Tuple[str, str],
    cfg: ForecastConfig,
    reference_cluster: int = 1,
    forecaster_factory: ForecasterFactory = LstmForecaster,
    jobs: int = 1,
) -> ExperimentReport:
    """
    Forecast 3 days ahead with all features for every cluster but the reference one.

    Args:
        dataset: Cleaned dataset.
        months: The YYYY-MM months to forecast.
        cfg: Experiment settings.
        reference_cluster: Cluster already covered by the monthly experiment.
        forecaster_factory: Builds a forecaster per job.
        jobs: Concurrent jobs.

    Returns:
        One row per (cluster, month).
    """
    cluster_ids = dataset.cluster_ids()
    if len(cluster_ids) < 2:
        raise DataError(f"need at least 2 clusters, dataset has {len(cluster_ids)}")
    remaining = [c for c in cluster_ids if c != reference_cluster]
    tasks = []
    for cluster_id in remaining:
        tasks += _month_tasks(dataset, cluster_id, list(months), [FeatureSet.ALL], cfg)
    results = _run_all(tasks, forecaster_factory, jobs)
    return ExperimentReport("clusters-3day", [_row("cluster", t, r) for t, r in zip(tasks, results)])


def run_annual_15day(
    dataset: Dataset,
    cluster_id: int,
    cfg: ForecastConfig,
    forecaster_factory: ForecasterFactory = LstmForecaster,
) -> ForecastResult:
    """
    Train on the whole span and forecast the final 15 days of the test segment.

    Args:
        dataset: Cleaned dataset covering roughly a year.
        cluster_id: Cluster to forecast.
        cfg: Experiment settings.
        forecaster_factory: Builds the forecaster.

    Returns:
        The scored 720-step forecast.
    """
    series = dataset.cluster_series(cluster_id)
    days = len(series) / STEPS_PER_DAY
    if days < MIN_ANNUAL_DAYS:
        raise DataError(f"cluster {cluster_id} spans {days:.1f} days; the 15-day experiment needs {MIN_ANNUAL_DAYS}")
    task = ForecastTask(series, cfg, FeatureSet.ALL, HORIZON_15_DAY, "annual")
    return run_task(task, forecaster_factory)


def annual_row(result: ForecastResult) -> ReportRow:
    """Report row of an annual forecast."""
    return ReportRow(
        scope="annual",
        month="all",
        cluster=result.cluster_id,
        features=result.features,
        mape_percent=result.mape_percent,
        rmse_kwh=result.rmse_kwh,
        nrmse_percent=result.nrmse_percent,
    )
