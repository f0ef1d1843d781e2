import json

import pytest

from config.run_config import REFERENCE_CONFIG, RunConfig, load_run_config, resolve_run_config
from features.windows import FeatureSet
from utils.exceptions import ConfigError


def _write(tmp_path, values):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(values))
    return str(path)


def test_defaults_without_any_source():
    cfg = resolve_run_config(env={})
    assert cfg == RunConfig()
    assert cfg.seed == 0 and cfg.selector is FeatureSet.ALL


def test_precedence_flags_over_file_over_environment(tmp_path):
    env = {"DEMANDCAST_SEED": "7"}
    assert resolve_run_config(env=env).seed == 7
    path = _write(tmp_path, {"seed": 3, "window": 24})
    from_file = resolve_run_config(path, env=env)
    assert (from_file.seed, from_file.window) == (3, 24)
    flagged = resolve_run_config(path, {"seed": 11, "window": None}, env=env)
    assert (flagged.seed, flagged.window) == (11, 24)


def test_reference_config_loads():
    cfg = resolve_run_config(REFERENCE_CONFIG, env={})
    assert (cfg.seed, cfg.hidden_size, cfg.window, cfg.features) == (42, 32, 48, "all")
    assert cfg.forecast_config().train.seed == 42


def test_unknown_keys_are_rejected(tmp_path):
    with pytest.raises(ConfigError, match="hidden_units"):
        load_run_config(_write(tmp_path, {"hidden_units": 8}))
    with pytest.raises(ConfigError, match="unknown configuration keys"):
        resolve_run_config(overrides={"epochs": 3}, env={})


@pytest.mark.parametrize(
    "values",
    [
        {"learning_rate": -1.0},
        {"features": "everything"},
        {"time_encoding": "cyclic"},
        {"train_frac": 0.5},
        {"window": 0},
        {"max_windows": 0},
    ],
)
def test_invalid_values_are_config_errors(tmp_path, values):
    with pytest.raises(ConfigError):
        resolve_run_config(_write(tmp_path, values), env={})


def test_bad_files_and_environment(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ConfigError, match="error parsing"):
        load_run_config(str(broken))
    with pytest.raises(ConfigError, match="error reading"):
        load_run_config(str(tmp_path / "absent.json"))
    with pytest.raises(ConfigError, match="must hold a JSON object"):
        load_run_config(_write(tmp_path, [1, 2]))
    with pytest.raises(ConfigError, match="DEMANDCAST_SEED"):
        resolve_run_config(env={"DEMANDCAST_SEED": "abc"})


def test_output_may_not_overwrite_input(tmp_path):
    with pytest.raises(ConfigError, match="overwrite"):
        RunConfig(model=str(tmp_path / "m.json"), out=str(tmp_path / "m.json"))
