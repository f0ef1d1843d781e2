"""
This module reads and writes trained models as a single JSON document.

Floats are written with Python's shortest round-trip representation, so
serialize -> parse -> serialize reproduces the same bytes.
"""

import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from features.scaler import ScalerParams
from features.windows import FeatureSet
from utils.exceptions import DataError
from utils.file_io import atomic_write_text

from .params import PARAM_NAMES, LstmParams

SCHEMA_VERSION = 1


@dataclass
class ForecastModel:
    """
    A trained network plus everything needed to feed it and read its output.

    Attributes:
        params: Network weights.
        consumption_scaler: Scaler of the consumption channel (kWh).
        temperature_scaler: Scaler of the temperature channel (degrees C).
        selector: Feature subset the network was trained on.
        window: Training window length L, also used as warmup length.
        time_encoding: 'concat' or 'monotonic'.
        cluster_id: Cluster whose profile the model was trained on.
    """

    params: LstmParams
    consumption_scaler: ScalerParams
    temperature_scaler: ScalerParams
    selector: FeatureSet = FeatureSet.ALL
    window: int = 48
    time_encoding: str = "concat"
    cluster_id: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "H": self.params.hidden_size,
            "D": self.params.input_size,
            "seed": self.params.seed,
            "weights": {name: tensor.tolist() for name, tensor in self.params.items()},
            "scalers": {
                "consumption": self.consumption_scaler.to_dict(),
                "temperature": self.temperature_scaler.to_dict(),
            },
            "features": self.selector.value,
            "window": self.window,
            "time_encoding": self.time_encoding,
            "cluster_id": self.cluster_id,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ForecastModel":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise DataError(f"unsupported model schema version {version!r}, expected {SCHEMA_VERSION}")
        try:
            weights = data["weights"]
            tensors = {name: np.asarray(weights[name], dtype=np.float64) for name in PARAM_NAMES}
            params = LstmParams(
                hidden_size=int(data["H"]), input_size=int(data["D"]), tensors=tensors, seed=data["seed"]
            )
            return cls(
                params=params,
                consumption_scaler=ScalerParams.from_dict(data["scalers"]["consumption"]),
                temperature_scaler=ScalerParams.from_dict(data["scalers"]["temperature"]),
                selector=FeatureSet(data["features"]),
                window=int(data["window"]),
                time_encoding=data["time_encoding"],
                cluster_id=data.get("cluster_id"),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"malformed model document: {e}") from e


def dumps_model(model: ForecastModel) -> str:
    """Serialize a model to its canonical JSON text."""
    return json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n"


def loads_model(text: str) -> ForecastModel:
    """Parse a model from JSON text."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DataError(f"model file is not valid JSON: {e}") from e
    return ForecastModel.from_dict(data)


def save_model(model: ForecastModel, path: str) -> None:
    """
    Write a model file atomically.

    Args:
        model: The model to save.
        path: Destination path.
    """
    atomic_write_text(path, dumps_model(model))
    logging.info(f"Saved model (H={model.params.hidden_size}, D={model.params.input_size}) to {path}")


def load_model(path: str) -> ForecastModel:
    """
    Read a model file.

    Args:
        path: Path of a file written by save_model.

    Returns:
        The parsed ForecastModel.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except IOError as e:
        raise DataError(f"cannot read model file {path}: {e}") from e
    model = loads_model(text)
    logging.info(f"Loaded model from {path}")
    return model
