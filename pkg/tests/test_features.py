import datetime

import numpy as np
import pandas as pd
import pytest

from features.scaler import ScalerParams, fit_scaler, scale, unscale
from features.time_features import (
    TimeStamp,
    day_code,
    encode_time,
    encode_time_monotonic,
    interval_of_clock,
    time_feature_series,
)
from features.windows import FeatureSet, build_windows, feature_matrix, stack_windows, thin_windows
from utils.exceptions import DataError


def test_interval_of_clock_anchors():
    assert interval_of_clock(0, 0) == 1
    assert interval_of_clock(23, 30) == 48
    assert interval_of_clock(8, 0) == 17


def test_interval_of_clock_is_a_bijection():
    intervals = [interval_of_clock(hh, mm) for hh in range(24) for mm in (0, 30)]
    assert sorted(intervals) == list(range(1, 49))


def test_interval_of_clock_rejects_off_grid_minutes():
    with pytest.raises(DataError):
        interval_of_clock(8, 15)
    with pytest.raises(DataError):
        interval_of_clock(24, 0)


def test_day_codes_start_on_sunday():
    assert day_code(datetime.date(2015, 3, 8)) == 1  # Sunday
    assert day_code(datetime.date(2015, 3, 10)) == 3  # Tuesday
    assert day_code(datetime.date(2015, 3, 14)) == 7  # Saturday


def test_encode_time_examples():
    assert encode_time(3, 18) == 318 / 748
    assert encode_time(7, 48) == 1.0
    assert encode_time(1, 1) == 11 / 748
    assert encode_time(3, 2) == 32 / 748


def test_encode_time_is_injective_and_bounded():
    values = [encode_time(d, k) for d in range(1, 8) for k in range(1, 49)]
    assert len(set(values)) == 336
    assert min(values) == 11 / 748
    assert max(values) == 1.0
    assert all(0 < v <= 1 for v in values)


def test_encode_time_rejects_out_of_range():
    with pytest.raises(DataError):
        encode_time(0, 5)
    with pytest.raises(DataError):
        encode_time(3, 49)


def test_monotonic_encoding_increases_through_the_week():
    values = [encode_time_monotonic(d, k) for d in range(1, 8) for k in range(1, 49)]
    assert np.all(np.diff(values) > 0)
    assert values[-1] == 1.0


def test_time_feature_series_matches_scalar_encoding():
    index = pd.date_range("2015-03-08", periods=7 * 48, freq="30min")
    for encoding in ("concat", "monotonic"):
        expected = [TimeStamp.from_datetime(t.to_pydatetime()).feature(encoding) for t in index]
        np.testing.assert_array_equal(time_feature_series(index, encoding), expected)


def test_time_feature_is_weekly_periodic():
    index = pd.date_range("2015-01-01", periods=3 * 7 * 48, freq="30min")
    values = time_feature_series(index)
    np.testing.assert_array_equal(values[: 7 * 48], values[7 * 48 : 14 * 48])


def test_tuesday_eight_am():
    stamp = TimeStamp.from_datetime(datetime.datetime(2015, 3, 10, 8, 30))
    assert (stamp.day, stamp.interval) == (3, 18)
    assert stamp.feature() == 318 / 748


def test_fit_scaler_examples():
    params = fit_scaler([2.0, 4.0, 6.0])
    assert (params.min, params.max) == (2.0, 6.0)
    scaled = scale(np.array([2.0, 4.0, 6.0]), params)
    np.testing.assert_array_equal(scaled, [0.0, 0.5, 1.0])


def test_fit_scaler_rejects_degenerate_series():
    with pytest.raises(DataError):
        fit_scaler([3.0, 3.0])
    with pytest.raises(DataError):
        fit_scaler([])


def test_scale_does_not_clip_and_inverts(rng):
    params = ScalerParams(min=1.0, max=3.0)
    assert scale(5.0, params) == 2.0
    x = rng.uniform(-10, 10, size=50)
    np.testing.assert_allclose(unscale(scale(x, params), params), x, rtol=0, atol=1e-12)


def test_scaler_fitted_on_training_data_only():
    series = np.array([1.0, 2.0, 3.0, 4.0, 10.0])
    train = series[:4]
    assert fit_scaler(train) != fit_scaler(series)
    assert scale(series[-1], fit_scaler(train)) > 1.0


def _aligned(n):
    timestamps = pd.date_range("2015-01-05", periods=n, freq="30min")
    consumption = np.linspace(0.0, 1.0, n)
    temperature = np.linspace(1.0, 0.0, n)
    return consumption, temperature, timestamps


@pytest.mark.parametrize(
    "selector, dim", [(FeatureSet.CONSUMPTION_TEMPERATURE, 2), (FeatureSet.CONSUMPTION_TIME, 2), (FeatureSet.ALL, 3)]
)
def test_build_windows_counts_and_dimensions(selector, dim):
    consumption, temperature, timestamps = _aligned(20)
    windows = build_windows(consumption, temperature, timestamps, 5, selector)
    assert len(windows) == 15
    assert windows[0].inputs.shape == (5, dim)
    assert selector.input_size == dim


def test_window_targets_are_next_step_consumption():
    consumption, temperature, timestamps = _aligned(10)
    windows = build_windows(consumption, temperature, timestamps, 4, FeatureSet.ALL)
    first = windows[0]
    np.testing.assert_array_equal(first.inputs[:, 0], consumption[:4])
    np.testing.assert_array_equal(first.targets, consumption[1:5])
    np.testing.assert_array_equal(first.inputs[:, 1], temperature[:4])
    np.testing.assert_array_equal(first.inputs[:, 2], time_feature_series(timestamps[:4]))


def test_build_windows_boundaries():
    consumption, temperature, timestamps = _aligned(6)
    assert len(build_windows(consumption, temperature, timestamps, 5, FeatureSet.ALL)) == 1
    with pytest.raises(DataError, match="shorter than window length"):
        build_windows(consumption[:5], temperature[:5], timestamps[:5], 5, FeatureSet.ALL)


def test_feature_matrix_rejects_misaligned_series():
    consumption, temperature, timestamps = _aligned(6)
    with pytest.raises(DataError, match="not aligned"):
        feature_matrix(consumption, temperature[:5], timestamps, FeatureSet.ALL)


def test_stack_windows_shapes():
    consumption, temperature, timestamps = _aligned(12)
    inputs, targets = stack_windows(build_windows(consumption, temperature, timestamps, 4, FeatureSet.CONSUMPTION_TIME))
    assert inputs.shape == (8, 4, 2)
    assert targets.shape == (8, 4)


def test_thin_windows_keeps_an_even_stride():
    consumption, temperature, timestamps = _aligned(30)
    windows = build_windows(consumption, temperature, timestamps, 4, FeatureSet.ALL)
    assert len(windows) == 26
    kept = thin_windows(windows, 10)
    assert len(kept) == 9
    np.testing.assert_array_equal(kept[1].inputs, windows[3].inputs)
    assert kept[0] is windows[0]
    assert thin_windows(windows, None) == windows
    assert thin_windows(windows, 26) == windows
    with pytest.raises(DataError, match="at least 1"):
        thin_windows(windows, 0)
