"""
This module aggregates consumer columns into per-cluster mean profiles.

Cluster assignments come from an external clustering step and are read from
a `consumer_id,cluster_id` CSV.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

import numpy as np
import pandas as pd

from utils.exceptions import DataError
from utils.file_io import atomic_write_text

from .matrix import ConsumptionMatrix

CLUSTER_COLUMNS = ["consumer_id", "cluster_id"]


@dataclass(frozen=True)
class ClusterProfile:
    """
    Mean consumption of a group of consumers.

    Attributes:
        cluster_id: Cluster label.
        members: Consumer ids in the cluster, ascending.
        profile: Mean kWh per interval across members, one entry per matrix row.
    """

    cluster_id: int
    members: Tuple[str, ...]
    profile: np.ndarray


def cluster_profile(m: ConsumptionMatrix, assignment: Mapping[str, int]) -> List[ClusterProfile]:
    """
    Average member columns per cluster.

    Args:
        m: Complete consumption matrix.
        assignment: Cluster of every consumer in the matrix.

    Returns:
        One ClusterProfile per cluster, ordered by cluster id.

    Raises:
        DataError: If a consumer is unassigned, the matrix has absent cells,
            or a cluster has no member in the matrix.
    """
    if not m.is_complete():
        raise DataError("cluster profiles need a complete matrix; run drop_incomplete first")
    unassigned = [c for c in m.consumer_ids if c not in assignment]
    if unassigned:
        raise DataError(f"{len(unassigned)} consumers have no cluster, e.g. {unassigned[:5]}")

    columns: Dict[int, List[int]] = defaultdict(list)
    for index, consumer_id in enumerate(m.consumer_ids):
        columns[int(assignment[consumer_id])].append(index)
    empty = sorted(set(int(c) for c in assignment.values()) - set(columns))
    if empty:
        raise DataError(f"clusters {empty} have no members in the consumption matrix")

    profiles = [
        ClusterProfile(
            cluster_id=cluster_id,
            members=tuple(m.consumer_ids[i] for i in indices),
            profile=m.values[:, indices].mean(axis=1),
        )
        for cluster_id, indices in sorted(columns.items())
    ]
    logging.info(
        f"Built {len(profiles)} cluster profiles: " + ", ".join(f"{p.cluster_id}:{len(p.members)}" for p in profiles)
    )
    return profiles


def parse_cluster_csv(path: str) -> Dict[str, int]:
    """
    Read a `consumer_id,cluster_id` assignment file.

    Args:
        path: CSV path.

    Returns:
        Mapping from consumer id to integer cluster id.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (IOError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"cannot read cluster assignment {path}: {e}") from e
    if list(frame.columns) != CLUSTER_COLUMNS:
        raise DataError(f"{path}:1: expected header {','.join(CLUSTER_COLUMNS)}, got {','.join(frame.columns)}")
    cluster_ids = pd.to_numeric(frame["cluster_id"], errors="coerce")
    bad = cluster_ids.isna() | (cluster_ids != cluster_ids.round())
    if bad.any():
        raise DataError(f"{path}:{int(np.flatnonzero(bad.to_numpy())[0]) + 2}: cluster_id is not an integer")
    repeated = frame["consumer_id"].duplicated()
    if repeated.any():
        raise DataError(f"{path}: consumer {frame['consumer_id'][repeated].iloc[0]} is assigned more than once")
    assignment = dict(zip(frame["consumer_id"], cluster_ids.astype(int)))
    logging.info(f"Loaded cluster assignment of {len(assignment)} consumers from {path}")
    return {str(k): int(v) for k, v in assignment.items()}


def write_cluster_csv(assignment: Mapping[str, int], path: str) -> None:
    """Write an assignment file with consumers in ascending id order."""
    consumers = sorted(assignment)
    frame = pd.DataFrame({"consumer_id": consumers, "cluster_id": [int(assignment[c]) for c in consumers]})
    atomic_write_text(path, frame[CLUSTER_COLUMNS].to_csv(index=False, lineterminator="\n"))
