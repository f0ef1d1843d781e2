"""
This module handles loading run configurations from JSON files and merging
them with command-line flags and the environment.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Mapping, Optional

from data.split import SplitSpec
from evaluation.forecasters import ForecastConfig
from features.time_features import TIME_ENCODINGS
from features.windows import FeatureSet
from training.trainer import TrainConfig
from utils.exceptions import ConfigError

SEED_ENV_VAR = "DEMANDCAST_SEED"
REFERENCE_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "reference.json")


@dataclass(frozen=True)
class RunConfig:
    """
    Fully resolved settings of one command.

    The training fields mirror TrainConfig, the *_frac fields SplitSpec.
    Paths are optional; each subcommand checks the ones it needs.
    """

    seed: int = 0
    learning_rate: float = 1e-3
    max_epochs: int = 500
    patience: int = 20
    grad_clip_norm: float = 1.0
    batch: int = 32
    loss_on: str = "all"
    log_every: int = 10
    train_frac: float = 0.7
    val_frac: float = 0.1
    test_frac: float = 0.2
    window: int = 48
    hidden_size: int = 32
    features: str = FeatureSet.ALL.value
    time_encoding: str = "concat"
    max_windows: Optional[int] = None
    horizon: int = 144
    cluster: int = 1
    months: List[str] = field(default_factory=list)
    jobs: int = 1
    data: Optional[str] = None
    model: Optional[str] = None
    out: Optional[str] = None

    def __post_init__(self) -> None:
        self.train_config()
        self.split_spec()
        try:
            FeatureSet(self.features)
        except ValueError:
            raise ConfigError(
                f"features must be one of {[s.value for s in FeatureSet]}, got '{self.features}'"
            ) from None
        if self.time_encoding not in TIME_ENCODINGS:
            raise ConfigError(f"time_encoding must be one of {TIME_ENCODINGS}, got '{self.time_encoding}'")
        if self.window < 1 or self.hidden_size < 1 or self.jobs < 1:
            raise ConfigError(
                f"window, hidden_size and jobs must be at least 1, got {self.window}, {self.hidden_size}, {self.jobs}"
            )
        if self.max_windows is not None and self.max_windows < 1:
            raise ConfigError(f"max_windows must be at least 1, got {self.max_windows}")
        if self.horizon < 0:
            raise ConfigError(f"horizon must be nonnegative, got {self.horizon}")
        inputs = {os.path.abspath(p) for p in (self.data, self.model) if p}
        if self.out and os.path.abspath(self.out) in inputs:
            raise ConfigError(f"output path {self.out} would overwrite an input")

    @property
    def selector(self) -> FeatureSet:
        return FeatureSet(self.features)

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            max_epochs=self.max_epochs,
            patience=self.patience,
            grad_clip_norm=self.grad_clip_norm,
            batch=self.batch,
            seed=self.seed,
            loss_on=self.loss_on,
            log_every=self.log_every,
        )

    def split_spec(self) -> SplitSpec:
        return SplitSpec(train_frac=self.train_frac, val_frac=self.val_frac, test_frac=self.test_frac)

    def forecast_config(self) -> ForecastConfig:
        return ForecastConfig(
            train=self.train_config(),
            split=self.split_spec(),
            window=self.window,
            hidden_size=self.hidden_size,
            time_encoding=self.time_encoding,
            max_windows=self.max_windows,
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _known_keys() -> List[str]:
    return [f.name for f in fields(RunConfig)]


def _check_keys(values: Mapping[str, Any], origin: str) -> None:
    unknown = sorted(set(values) - set(_known_keys()))
    if unknown:
        raise ConfigError(f"unknown configuration keys in {origin}: {', '.join(unknown)}")


def load_run_config(path: str) -> Dict[str, Any]:
    """
    Load configuration values from a JSON file.

    Args:
        path: JSON file holding an object of RunConfig fields.

    Returns:
        The values found in the file.

    Raises:
        ConfigError: If the file cannot be read, is not a JSON object or
            holds unknown keys.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            values = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"error parsing {path}: {e}") from e
    except OSError as e:
        raise ConfigError(f"error reading {path}: {e}") from e
    if not isinstance(values, dict):
        raise ConfigError(f"{path} must hold a JSON object, got {type(values).__name__}")
    _check_keys(values, path)
    logging.info(f"Loaded {len(values)} settings from {path}")
    return values


def _env_seed(env: Mapping[str, str]) -> Dict[str, Any]:
    raw = env.get(SEED_ENV_VAR)
    if raw is None or raw == "":
        return {}
    try:
        return {"seed": int(raw)}
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got '{raw}'") from None


def resolve_run_config(
    config_path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    env: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """
    Merge every configuration source into one RunConfig.

    Precedence from strongest to weakest: explicit overrides (command-line
    flags), the JSON config file, the DEMANDCAST_SEED environment variable
    (seed only), built-in defaults. Overrides set to None are ignored.

    Args:
        config_path: Optional JSON config file.
        overrides: Values given on the command line.
        env: Environment mapping; os.environ when omitted.

    Returns:
        The resolved RunConfig.
    """
    values: Dict[str, Any] = {}
    values.update(_env_seed(os.environ if env is None else env))
    if config_path:
        values.update(load_run_config(config_path))
    flags = {k: v for k, v in (overrides or {}).items() if v is not None}
    _check_keys(flags, "command-line overrides")
    values.update(flags)
    try:
        return RunConfig(**values)
    except TypeError as e:
        raise ConfigError(f"invalid configuration: {e}") from e
