"""Smart-meter ingestion, matrix cleaning, cluster profiles, splits and synthetic data."""

from .dataset import ClusterSeries, Dataset, load_dataset, write_dataset
from .matrix import ConsumptionMatrix, build_matrix, drop_incomplete
from .profiles import ClusterProfile, cluster_profile, parse_cluster_csv, write_cluster_csv
from .readings import MeterReading, iter_readings, parse_meter_csv, parse_meter_files, readings_frame, write_meter_csv
from .split import SplitSpec, split_bounds, split_chrono
from .synthetic import (
    ARCHETYPES,
    SeasonalTempSpec,
    SyntheticDataset,
    comfort_excess,
    consumer_demand,
    draw_consumers,
    generate_synthetic,
)
from .weather import parse_temperature_csv, write_temperature_csv

__all__ = [
    "ARCHETYPES",
    "ClusterProfile",
    "ClusterSeries",
    "ConsumptionMatrix",
    "Dataset",
    "MeterReading",
    "SeasonalTempSpec",
    "SplitSpec",
    "SyntheticDataset",
    "build_matrix",
    "cluster_profile",
    "comfort_excess",
    "consumer_demand",
    "draw_consumers",
    "drop_incomplete",
    "generate_synthetic",
    "iter_readings",
    "load_dataset",
    "parse_cluster_csv",
    "parse_meter_csv",
    "parse_meter_files",
    "parse_temperature_csv",
    "readings_frame",
    "split_bounds",
    "split_chrono",
    "write_cluster_csv",
    "write_dataset",
    "write_meter_csv",
    "write_temperature_csv",
]
