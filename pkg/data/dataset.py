"""
This module assembles a cleaned dataset directory into forecastable series.

A dataset directory holds one or more `meter*.csv` reading files,
`temperature.csv`, `clusters.csv` and, for generated data, `manifest.json`.
"""

import glob
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from utils.exceptions import DataError
from utils.file_io import atomic_write_text

from .matrix import ConsumptionMatrix, build_matrix, drop_incomplete
from .profiles import ClusterProfile, cluster_profile, parse_cluster_csv, write_cluster_csv
from .readings import parse_meter_files, write_meter_csv
from .synthetic import SyntheticDataset
from .weather import parse_temperature_csv, write_temperature_csv

METER_GLOB = "meter*.csv"
TEMPERATURE_FILE = "temperature.csv"
CLUSTER_FILE = "clusters.csv"
MANIFEST_FILE = "manifest.json"


@dataclass(frozen=True)
class ClusterSeries:
    """
    A cluster's mean consumption with aligned temperature.

    Attributes:
        cluster_id: Cluster label.
        timestamps: Interval start times, uniform 30-minute grid.
        consumption: Mean kWh per interval.
        temperature: Degrees C per interval.
    """

    cluster_id: int
    timestamps: pd.DatetimeIndex
    consumption: np.ndarray
    temperature: np.ndarray

    def __len__(self) -> int:
        return len(self.timestamps)

    def slice(self, bounds: slice) -> "ClusterSeries":
        return ClusterSeries(
            cluster_id=self.cluster_id,
            timestamps=self.timestamps[bounds],
            consumption=self.consumption[bounds],
            temperature=self.temperature[bounds],
        )

    def months(self) -> List[str]:
        """Calendar months covered, as YYYY-MM labels in order."""
        return list(dict.fromkeys(self.timestamps.strftime("%Y-%m")))

    def month(self, label: str) -> "ClusterSeries":
        """
        Restrict the series to one calendar month.

        Args:
            label: Month as YYYY-MM.
        """
        positions = np.flatnonzero(self.timestamps.strftime("%Y-%m") == label)
        if positions.size == 0:
            raise DataError(f"cluster {self.cluster_id} has no data in month {label}")
        return self.slice(slice(int(positions[0]), int(positions[-1]) + 1))


@dataclass
class Dataset:
    """
    Cleaned consumption matrix, aligned temperature and cluster assignment.

    Attributes:
        matrix: Complete consumption matrix.
        temperature: Degrees C on the matrix time index.
        assignment: Cluster of every consumer.
        removed: Timestamps dropped while cleaning.
    """

    matrix: ConsumptionMatrix
    temperature: pd.Series
    assignment: Dict[str, int]
    removed: List[pd.Timestamp] = field(default_factory=list)
    _profiles: Optional[Dict[int, ClusterProfile]] = field(default=None, repr=False)

    @classmethod
    def assemble(cls, readings: pd.DataFrame, temperature: pd.Series, assignment: Dict[str, int]) -> "Dataset":
        """
        Build, clean and align a dataset from its raw parts.

        Args:
            readings: Readings frame.
            temperature: Temperature series on (at least) the reading grid.
            assignment: Cluster of every consumer.
        """
        matrix, removed = drop_incomplete(build_matrix(readings))
        aligned = temperature.reindex(matrix.time_index)
        if aligned.isna().any():
            missing = aligned.index[aligned.isna()]
            raise DataError(f"temperature is missing at {len(missing)} timestamps, first {missing[0]:%Y-%m-%dT%H:%M}")
        return cls(matrix=matrix, temperature=aligned, assignment=dict(assignment), removed=removed)

    @classmethod
    def from_synthetic(cls, synthetic: SyntheticDataset) -> "Dataset":
        return cls.assemble(synthetic.readings, synthetic.temperature, synthetic.assignment)

    def profiles(self) -> Dict[int, ClusterProfile]:
        if self._profiles is None:
            self._profiles = {p.cluster_id: p for p in cluster_profile(self.matrix, self.assignment)}
        return self._profiles

    def cluster_ids(self) -> List[int]:
        return sorted(self.profiles())

    def cluster_series(self, cluster_id: int) -> ClusterSeries:
        """
        The forecasting target of one cluster.

        Args:
            cluster_id: Cluster label.

        Returns:
            The ClusterSeries over the whole dataset span.
        """
        profiles = self.profiles()
        if cluster_id not in profiles:
            raise DataError(f"unknown cluster {cluster_id}; available clusters are {sorted(profiles)}")
        if not self.matrix.is_uniform():
            raise DataError("the cleaned time grid has interior gaps; series cannot be windowed across them")
        return ClusterSeries(
            cluster_id=cluster_id,
            timestamps=self.matrix.time_index,
            consumption=profiles[cluster_id].profile,
            temperature=self.temperature.to_numpy(dtype=np.float64),
        )


def meter_files(directory: str) -> List[str]:
    paths = sorted(glob.glob(os.path.join(directory, METER_GLOB)))
    if not paths:
        raise DataError(f"no {METER_GLOB} files in {directory}")
    return paths


def load_dataset(directory: str, jobs: int = 1) -> Dataset:
    """
    Load and clean a dataset directory.

    Args:
        directory: Directory holding meter, temperature and cluster files.
        jobs: Number of meter files parsed concurrently.

    Returns:
        The cleaned Dataset.
    """
    logging.info(f"Loading dataset from {directory}")
    readings = parse_meter_files(meter_files(directory), jobs=jobs)
    temperature = parse_temperature_csv(os.path.join(directory, TEMPERATURE_FILE))
    assignment = parse_cluster_csv(os.path.join(directory, CLUSTER_FILE))
    return Dataset.assemble(readings, temperature, assignment)


def _chunks(readings: pd.DataFrame, chunk_days: int) -> List[Tuple[str, pd.DataFrame]]:
    if chunk_days <= 0:
        return [("meter.csv", readings)]
    day = (readings["timestamp"] - readings["timestamp"].min()).dt.days // chunk_days
    return [(f"meter_{int(n):03d}.csv", part) for n, part in readings.groupby(day, sort=True)]


def write_dataset(synthetic: SyntheticDataset, directory: str, chunk_days: int = 0) -> List[str]:
    """
    Write a generated dataset and its manifest.

    Args:
        synthetic: Output of generate_synthetic.
        directory: Destination directory.
        chunk_days: Split readings into files of this many days; 0 writes one file.

    Returns:
        Paths of the written files, in write order.
    """
    os.makedirs(directory, exist_ok=True)
    written = []
    for name, part in _chunks(synthetic.readings, chunk_days):
        path = os.path.join(directory, name)
        write_meter_csv(part, path)
        written.append(path)
    temperature_path = os.path.join(directory, TEMPERATURE_FILE)
    write_temperature_csv(synthetic.temperature, temperature_path)
    cluster_path = os.path.join(directory, CLUSTER_FILE)
    write_cluster_csv(synthetic.assignment, cluster_path)
    manifest_path = os.path.join(directory, MANIFEST_FILE)
    atomic_write_text(manifest_path, json.dumps(synthetic.manifest, indent=2, sort_keys=True) + "\n")
    written += [temperature_path, cluster_path, manifest_path]
    logging.info(f"Wrote synthetic dataset ({len(written)} files) to {directory}")
    return written
