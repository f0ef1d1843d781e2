"""
Command-line entry point of the forecasting pipeline.

Subcommands: synth, train, forecast, eval-monthly, eval-clusters,
eval-annual, gradcheck and plot. Every command that writes files also writes
a run-manifest.json beside its outputs. Exit codes: 0 success, 1 usage
error, 2 data error, 3 numerical failure.
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from config.run_config import SEED_ENV_VAR, RunConfig, resolve_run_config
from data.dataset import ClusterSeries, Dataset, load_dataset, write_dataset
from data.synthetic import generate_synthetic
from evaluation.experiments import annual_row, run_annual_15day, run_clusters_3day, run_monthly_3day
from evaluation.forecasters import ForecastTask, LstmForecaster, PersistenceForecaster, forecast_with_model
from evaluation.metrics import forecast_csv, score_forecast
from evaluation.report import ExperimentReport
from features.time_features import TIME_ENCODINGS
from features.windows import FeatureSet
from lstm.serialization import dumps_model, load_model
from training.gradcheck import GRADCHECK_TOLERANCE, check_gradients
from training.loss import LOSS_PLACEMENTS
from utils.exceptions import DemandcastError, MetricError, UsageError
from utils.file_io import atomic_write_text, sha256_file
from utils.logging_config import DEFAULT_LOG_FILE, configure_logging

from .plot import plot

MANIFEST_NAME = "run-manifest.json"
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]
FORECASTERS = {"lstm": LstmForecaster, "persistence": PersistenceForecaster}
SELECTOR_CHOICES = [s.value for s in FeatureSet]


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting with status 2."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _add_config_flags(parser: argparse.ArgumentParser, training: bool = True) -> None:
    parser.add_argument("--config", type=str, default=None, help="JSON run configuration file")
    parser.add_argument("--seed", type=int, default=None, help=f"Random seed (default: ${SEED_ENV_VAR} or 0)")
    parser.add_argument("--jobs", type=int, default=None, help="Concurrent jobs")
    if not training:
        return
    group = parser.add_argument_group("model and training")
    group.add_argument("--learning-rate", dest="learning_rate", type=float, default=None, help="Adam step size")
    group.add_argument("--max-epochs", dest="max_epochs", type=int, default=None, help="Maximum training epochs")
    group.add_argument("--patience", type=int, default=None, help="Early-stopping patience in epochs")
    group.add_argument(
        "--grad-clip-norm", dest="grad_clip_norm", type=float, default=None, help="Global gradient norm cap"
    )
    group.add_argument("--batch", type=int, default=None, help="Windows per update")
    group.add_argument(
        "--loss-on", dest="loss_on", choices=LOSS_PLACEMENTS, default=None, help="Steps scored per window"
    )
    group.add_argument("--window", type=int, default=None, help="Window length L")
    group.add_argument(
        "--max-windows", dest="max_windows", type=int, default=None, help="Cap on training and validation windows"
    )
    group.add_argument("--hidden-size", dest="hidden_size", type=int, default=None, help="LSTM hidden size H")
    group.add_argument("--features", choices=SELECTOR_CHOICES, default=None, help="Feature subset")
    group.add_argument(
        "--time-encoding", dest="time_encoding", choices=TIME_ENCODINGS, default=None, help="Time feature"
    )
    group.add_argument("--train-frac", dest="train_frac", type=float, default=None, help="Training share of a series")
    group.add_argument("--val-frac", dest="val_frac", type=float, default=None, help="Validation share of a series")
    group.add_argument("--test-frac", dest="test_frac", type=float, default=None, help="Test share of a series")


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(prog="demandcast", description="LSTM energy demand forecasting pipeline")
    parser.add_argument("--log-level", dest="log_level", choices=LOG_LEVELS, default="INFO", help="Logging level")
    parser.add_argument(
        "--log-file", dest="log_file", default=DEFAULT_LOG_FILE, help="Log file path; empty disables file logging"
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    synth = commands.add_parser("synth", help="Generate a synthetic smart-meter dataset")
    _add_config_flags(synth, training=False)
    synth.add_argument("--consumers", type=int, default=16, help="Number of households")
    synth.add_argument("--days", type=int, default=365, help="Number of days")
    synth.add_argument("--start", type=str, default="2015-03-09", help="First day, YYYY-MM-DD")
    synth.add_argument(
        "--missing-leading", dest="missing_leading", type=int, default=0, help="Leading gapped timestamps"
    )
    synth.add_argument(
        "--chunk-days", dest="chunk_days", type=int, default=0, help="Days per meter file; 0 for one file"
    )
    synth.add_argument("--out", type=str, required=True, help="Output directory")
    synth.set_defaults(handler=cmd_synth)

    train = commands.add_parser("train", help="Train a model on one cluster")
    _add_config_flags(train)
    train.add_argument("--data", type=str, required=True, help="Dataset directory")
    train.add_argument("--cluster", type=int, default=None, help="Cluster to train on")
    train.add_argument("--month", type=str, default=None, help="Restrict training to one YYYY-MM month")
    train.add_argument("--model-out", dest="model_out", type=str, required=True, help="Model JSON to write")
    train.add_argument("--report-out", dest="report_out", type=str, default=None, help="Training report CSV to write")
    train.set_defaults(handler=cmd_train)

    forecast = commands.add_parser("forecast", help="Closed-loop forecast of the final steps of a series")
    _add_config_flags(forecast, training=False)
    forecast.add_argument("--model", type=str, required=True, help="Model JSON")
    forecast.add_argument("--data", type=str, required=True, help="Dataset directory")
    forecast.add_argument("--horizon", type=int, default=None, help="Steps to forecast")
    forecast.add_argument("--cluster", type=int, default=None, help="Cluster (default: the model's)")
    forecast.add_argument("--month", type=str, default=None, help="Forecast the end of one YYYY-MM month")
    forecast.add_argument("--out", type=str, required=True, help="Forecast CSV to write")
    forecast.set_defaults(handler=cmd_forecast)

    monthly = commands.add_parser("eval-monthly", help="3-day forecasts of one cluster in every month")
    _add_config_flags(monthly)
    monthly.add_argument("--data", type=str, required=True, help="Dataset directory")
    monthly.add_argument("--cluster", type=int, default=None, help="Cluster to forecast")
    monthly.add_argument("--months", nargs="+", default=None, help="YYYY-MM months (default: all long enough)")
    monthly.add_argument(
        "--compare", nargs="+", choices=SELECTOR_CHOICES, default=SELECTOR_CHOICES, help="Feature subsets to compare"
    )
    monthly.add_argument("--forecaster", choices=sorted(FORECASTERS), default="lstm", help="Forecasting model")
    monthly.add_argument("--out", type=str, required=True, help="Report CSV to write")
    monthly.set_defaults(handler=cmd_eval_monthly)

    clusters = commands.add_parser("eval-clusters", help="3-day forecasts of the remaining clusters")
    _add_config_flags(clusters)
    clusters.add_argument("--data", type=str, required=True, help="Dataset directory")
    clusters.add_argument("--months", nargs=2, required=True, metavar="YYYY-MM", help="The two months to forecast")
    clusters.add_argument(
        "--reference-cluster", dest="reference_cluster", type=int, default=1, help="Cluster left out of this run"
    )
    clusters.add_argument("--forecaster", choices=sorted(FORECASTERS), default="lstm", help="Forecasting model")
    clusters.add_argument("--out", type=str, required=True, help="Report CSV to write")
    clusters.set_defaults(handler=cmd_eval_clusters)

    annual = commands.add_parser("eval-annual", help="15-day forecast after training on the whole year")
    _add_config_flags(annual)
    annual.add_argument("--data", type=str, required=True, help="Dataset directory")
    annual.add_argument("--cluster", type=int, default=None, help="Cluster to forecast")
    annual.add_argument("--forecaster", choices=sorted(FORECASTERS), default="lstm", help="Forecasting model")
    annual.add_argument("--out", type=str, required=True, help="Forecast CSV to write")
    annual.add_argument("--report-out", dest="report_out", type=str, default=None, help="Report CSV to write")
    annual.set_defaults(handler=cmd_eval_annual)

    gradcheck = commands.add_parser("gradcheck", help="Compare analytic gradients with finite differences")
    gradcheck.add_argument(
        "--seed", type=int, default=None, help=f"Seed of the random instances (default: ${SEED_ENV_VAR} or 0)"
    )
    gradcheck.add_argument("--instances", type=int, default=20, help="Number of random instances")
    gradcheck.set_defaults(handler=cmd_gradcheck)

    plot_cmd = commands.add_parser("plot", help="Render a forecast CSV as SVG")
    plot_cmd.add_argument("--forecast", type=str, required=True, help="Forecast CSV")
    plot_cmd.add_argument("--out", type=str, required=True, help="SVG file to write")
    plot_cmd.set_defaults(handler=cmd_plot)
    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    keys = RunConfig.__dataclass_fields__
    overrides = {k: v for k, v in vars(args).items() if k in keys}
    return resolve_run_config(getattr(args, "config", None), overrides)


def write_manifest(
    command: str, cfg: Optional[RunConfig], outputs: Sequence[str], options: Optional[Dict[str, Any]] = None
) -> str:
    """
    Write run-manifest.json beside the first output.

    The manifest holds the resolved configuration, the seed, the command's
    other options and the SHA-256 of every output file.
    """
    directory = os.path.dirname(os.path.abspath(outputs[0])) if outputs else os.getcwd()
    path = os.path.join(directory, MANIFEST_NAME)
    manifest = {
        "command": command,
        "config": cfg.to_dict() if cfg else None,
        "seed": cfg.seed if cfg else None,
        "options": options or {},
        "artifacts": {os.path.relpath(os.path.abspath(p), directory): sha256_file(p) for p in outputs},
    }
    atomic_write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    logging.info(f"Wrote run manifest to {path}")
    return path


def _series(dataset: Dataset, cluster_id: int, month: Optional[str]) -> ClusterSeries:
    series = dataset.cluster_series(cluster_id)
    return series.month(month) if month else series


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    synthetic = generate_synthetic(
        seed=cfg.seed,
        consumers=args.consumers,
        days=args.days,
        start=args.start,
        missing_leading=args.missing_leading,
    )
    written = write_dataset(synthetic, args.out, chunk_days=args.chunk_days)
    options = {
        "consumers": args.consumers,
        "days": args.days,
        "start": args.start,
        "missing_leading": args.missing_leading,
        "chunk_days": args.chunk_days,
    }
    write_manifest("synth", cfg, written, options)
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    if os.path.abspath(args.model_out) == os.path.abspath(args.data):
        raise UsageError("--model-out must differ from --data")
    dataset = load_dataset(args.data, jobs=cfg.jobs)
    series = _series(dataset, cfg.cluster, args.month)
    task = ForecastTask(series, cfg.forecast_config(), cfg.selector, horizon=0, label=args.month or "all")
    forecaster = LstmForecaster(task.config)
    forecaster.fit(task)

    report_out = args.report_out or os.path.splitext(args.model_out)[0] + "-report.csv"
    atomic_write_text(args.model_out, dumps_model(forecaster.model))
    atomic_write_text(report_out, forecaster.report.to_csv())
    logging.info(
        f"Trained {forecaster.report.epochs_run} epochs, best epoch {forecaster.report.best_epoch} "
        f"(validation RMSE {forecaster.report.best_val_rmse:.6f})"
    )
    write_manifest("train", cfg, [args.model_out, report_out], {"month": args.month})
    return 0


def cmd_forecast(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    if cfg.horizon < 1:
        raise UsageError(f"--horizon must be at least 1, got {cfg.horizon}")
    model = load_model(args.model)
    cluster_id = args.cluster if args.cluster is not None else model.cluster_id
    if cluster_id is None:
        cluster_id = cfg.cluster
    dataset = load_dataset(args.data, jobs=cfg.jobs)
    series = _series(dataset, cluster_id, args.month)
    start = len(series) - cfg.horizon
    predicted = forecast_with_model(model, series, start, cfg.horizon)
    actual = series.consumption[start:]
    timestamps = series.timestamps[start:]
    atomic_write_text(args.out, forecast_csv(timestamps, actual, predicted))
    try:
        result = score_forecast(timestamps, actual, predicted, cluster_id=cluster_id, features=model.selector.label)
        logging.info(
            f"Forecast {cfg.horizon} steps: MAPE {result.mape_percent:.3f}%, RMSE {result.rmse_kwh:.4f} kWh, "
            f"nRMSE {result.nrmse_percent:.3f}%"
        )
    except MetricError as e:
        logging.warning(f"Forecast written but not scored: {e}")
    write_manifest("forecast", cfg, [args.out], {"cluster": cluster_id, "month": args.month})
    return 0


def _write_report(report: ExperimentReport, path: str) -> None:
    atomic_write_text(path, report.to_csv())
    logging.info(f"Wrote {report.name} report with {len(report.rows)} rows to {path}")


def cmd_eval_monthly(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    dataset = load_dataset(args.data, jobs=cfg.jobs)
    selectors = [FeatureSet(value) for value in dict.fromkeys(args.compare)]
    report = run_monthly_3day(
        dataset,
        cfg.cluster,
        selectors,
        cfg.forecast_config(),
        months=cfg.months or None,
        forecaster_factory=FORECASTERS[args.forecaster],
        jobs=cfg.jobs,
    )
    _write_report(report, args.out)
    options = {"compare": [s.value for s in selectors], "forecaster": args.forecaster}
    write_manifest("eval-monthly", cfg, [args.out], options)
    return 0


def cmd_eval_clusters(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    dataset = load_dataset(args.data, jobs=cfg.jobs)
    report = run_clusters_3day(
        dataset,
        (cfg.months[0], cfg.months[1]),
        cfg.forecast_config(),
        reference_cluster=args.reference_cluster,
        forecaster_factory=FORECASTERS[args.forecaster],
        jobs=cfg.jobs,
    )
    _write_report(report, args.out)
    options = {"reference_cluster": args.reference_cluster, "forecaster": args.forecaster}
    write_manifest("eval-clusters", cfg, [args.out], options)
    return 0


def cmd_eval_annual(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    dataset = load_dataset(args.data, jobs=cfg.jobs)
    result = run_annual_15day(
        dataset, cfg.cluster, cfg.forecast_config(), forecaster_factory=FORECASTERS[args.forecaster]
    )
    atomic_write_text(args.out, result.to_csv())
    outputs = [args.out]
    if args.report_out:
        _write_report(ExperimentReport("annual-15day", [annual_row(result)]), args.report_out)
        outputs.append(args.report_out)
    write_manifest("eval-annual", cfg, outputs, {"forecaster": args.forecaster})
    return 0


def cmd_gradcheck(args: argparse.Namespace) -> int:
    if args.instances < 1:
        raise UsageError(f"--instances must be at least 1, got {args.instances}")
    seed = _resolve(args).seed
    result = check_gradients(seed, instances=args.instances)
    print(f"{result.max_relative_error:.6e}")
    if not result.passed():
        logging.error(
            f"Gradient check failed: max relative error {result.max_relative_error:.3e} >= {GRADCHECK_TOLERANCE}"
        )
        return 3
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    if os.path.abspath(args.forecast) == os.path.abspath(args.out):
        raise UsageError("--out must differ from --forecast")
    written = plot(args.forecast, args.out)
    write_manifest("plot", None, written, {"forecast": args.forecast})
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name; sys.argv[1:] when omitted.

    Returns:
        The process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(args.log_level, args.log_file)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except DemandcastError as e:
        logging.error(f"{args.command} failed: {e}")
        logging.exception("Exception details:")
        return e.exit_code
    except Exception:
        logging.error(f"An unexpected error occurred while running {args.command}")
        logging.exception("Exception details:")
        return 3
