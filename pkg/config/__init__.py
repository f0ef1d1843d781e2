"""Run configuration: JSON files, environment defaults and command-line overrides."""

from .run_config import REFERENCE_CONFIG, SEED_ENV_VAR, RunConfig, load_run_config, resolve_run_config

__all__ = ["REFERENCE_CONFIG", "SEED_ENV_VAR", "RunConfig", "load_run_config", "resolve_run_config"]
