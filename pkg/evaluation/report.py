"""
This module holds experiment report tables.
"""

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

REPORT_COLUMNS = ["scope", "month", "cluster", "features", "mape_percent", "rmse_kwh", "nrmse_percent"]


@dataclass(frozen=True)
class ReportRow:
    """One scored (month or cluster, feature set) cell of an experiment."""

    scope: str
    month: str
    cluster: Optional[int]
    features: str
    mape_percent: float
    rmse_kwh: float
    nrmse_percent: float


@dataclass
class ExperimentReport:
    """
    Rows of an experiment plus one average row per feature set.

    Attributes:
        name: Experiment name, e.g. 'monthly-3day'.
        rows: Scored rows in job order.
    """

    name: str
    rows: List[ReportRow] = field(default_factory=list)

    @property
    def averages(self) -> List[ReportRow]:
        """Arithmetic mean of the rows of every feature set, in first-seen order."""
        groups: Dict[str, List[ReportRow]] = {}
        for row in self.rows:
            groups.setdefault(row.features, []).append(row)
        averages = []
        for features, rows in groups.items():
            clusters = {row.cluster for row in rows}
            averages.append(
                ReportRow(
                    scope="average",
                    month="all",
                    cluster=clusters.pop() if len(clusters) == 1 else None,
                    features=features,
                    mape_percent=float(np.mean([r.mape_percent for r in rows])),
                    rmse_kwh=float(np.mean([r.rmse_kwh for r in rows])),
                    nrmse_percent=float(np.mean([r.nrmse_percent for r in rows])),
                )
            )
        return averages

    def to_frame(self) -> pd.DataFrame:
        """Rows followed by averages; clusters of mixed-cluster averages are missing."""
        frame = pd.DataFrame([asdict(row) for row in self.rows + self.averages], columns=REPORT_COLUMNS)
        frame["cluster"] = frame["cluster"].astype("Int64")
        return frame

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False, lineterminator="\n")
