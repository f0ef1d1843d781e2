import math

import numpy as np
import pytest

from features.windows import FeatureWindow
from lstm.cell import forward
from lstm.params import init_params, zero_params
from training.bptt import bptt
from training.gradcheck import check_gradients, finite_diff, random_instance
from training.gradients import Gradients
from training.loss import rmse_loss, sequence_mse
from training.optimizer import Adam
from training.trainer import TrainConfig, evaluate_rmse, train
from utils.exceptions import ConfigError, NumericalError, ShapeError


def test_rmse_loss_examples():
    assert rmse_loss([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert rmse_loss([3.0, 4.0], [0.0, 0.0]) == pytest.approx(3.5355339, abs=1e-7)
    assert rmse_loss([2.5], [1.0]) == 1.5


def test_rmse_loss_rejects_bad_lengths():
    with pytest.raises(ShapeError):
        rmse_loss([], [])
    with pytest.raises(ShapeError):
        rmse_loss([1.0], [1.0, 2.0])


def test_last_step_loss_ignores_earlier_steps():
    pred = np.array([5.0, 5.0, 1.0])
    target = np.array([0.0, 0.0, 0.0])
    assert sequence_mse(pred, target, "last") == 1.0
    assert sequence_mse(pred, target, "all") == pytest.approx(17.0)


def test_gradients_vanish_at_a_perfect_fit(small_params, rng):
    xs = rng.normal(size=(6, 2))
    predictions, trace = forward(small_params, xs)
    grads = bptt(small_params, trace, predictions.copy())
    assert grads.global_norm() == 0.0


def test_bptt_matches_finite_differences_on_random_instances():
    result = check_gradients(seed=2024, instances=20)
    assert len(result.errors) == 20
    assert result.max_relative_error < 1e-5
    assert result.passed()


@pytest.mark.parametrize("loss_on", ["all", "last"])
def test_bptt_matches_finite_differences_on_batches(rng, loss_on):
    p, _, _ = random_instance(rng)
    xs = rng.normal(size=(5, 3, p.input_size))
    targets = rng.uniform(-1, 1, size=(5, 3))
    _, trace = forward(p, xs)
    analytic = bptt(p, trace, targets, loss_on)
    numeric = finite_diff(p, xs, targets, loss_on=loss_on)
    assert analytic.max_relative_error(numeric) < 1e-5


def test_single_step_scalar_gradients_by_hand():
    p = init_params(1, 1, seed=3)
    x, y = 0.8, 0.25
    predictions, trace = forward(p, np.array([[x]]))
    grads = bptt(p, trace, np.array([y]))
    i, f, o, g, c = (float(a[0, 0]) for a in (trace.i, trace.f, trace.o, trace.g, trace.c))
    w = float(p["head_weights"][0])
    dy = 2.0 * (float(predictions[0]) - y)
    dh = dy * w
    dc = dh * o * (1.0 - math.tanh(c) ** 2)
    assert grads["head_bias"][0] == pytest.approx(dy, abs=1e-12)
    assert grads["head_weights"][0] == pytest.approx(dy * o * math.tanh(c), abs=1e-12)
    assert grads["input_o"][0, 0] == pytest.approx(dh * math.tanh(c) * o * (1 - o) * x, abs=1e-12)
    assert grads["input_i"][0, 0] == pytest.approx(dc * g * i * (1 - i) * x, abs=1e-12)
    assert grads["input_c"][0, 0] == pytest.approx(dc * i * (1 - g**2) * x, abs=1e-12)
    # c_prev = 0 and h_prev = 0 on the first step
    assert grads["input_f"][0, 0] == 0.0
    assert grads["recurrent_i"][0, 0] == 0.0


def test_finite_diff_head_bias_is_twice_mean_error(small_params, rng):
    xs = rng.normal(size=(4, 2))
    targets = rng.normal(size=4)
    predictions, _ = forward(small_params, xs)
    numeric = finite_diff(small_params, xs, targets)
    assert numeric["head_bias"][0] == pytest.approx(2.0 * np.mean(predictions - targets), abs=1e-8)


def test_clipping_bounds_the_global_norm(small_params, rng):
    grads = Gradients({name: rng.normal(scale=10.0, size=t.shape) for name, t in small_params.items()})
    clipped, before = grads.clip(1.0)
    assert before > 1.0
    assert clipped.global_norm() <= 1.0 + 1e-12
    unchanged, _ = clipped.clip(5.0)
    assert unchanged is clipped


def test_adam_first_step_moves_by_learning_rate():
    p = zero_params(1, 1)
    grads = Gradients.zeros_like(p)
    grads.tensors["head_bias"] = np.array([0.3])
    Adam(learning_rate=0.01).step(p, grads)
    assert p.head_bias == pytest.approx(-0.01, rel=1e-6)


def test_train_config_validation():
    with pytest.raises(ConfigError):
        TrainConfig(learning_rate=0.0)
    with pytest.raises(ConfigError):
        TrainConfig(patience=0)
    with pytest.raises(ConfigError):
        TrainConfig(grad_clip_norm=-1.0)
    with pytest.raises(ConfigError):
        TrainConfig(loss_on="middle")


def _constant_windows(n, length, dim, value, target):
    return [FeatureWindow(inputs=np.full((length, dim), value), targets=np.full(length, target)) for _ in range(n)]


def test_training_converges_on_a_constant_target():
    windows = _constant_windows(64, 8, 2, 0.5, 0.3)
    cfg = TrainConfig(learning_rate=0.01, max_epochs=200, patience=200, batch=8, seed=1)
    params, report = train(init_params(4, 2, seed=1), windows, windows[:8], cfg)
    inputs = np.stack([w.inputs for w in windows])
    targets = np.stack([w.targets for w in windows])
    assert evaluate_rmse(params, inputs, targets) < 1e-3
    assert report.epochs_run == 200
    assert report.stop_reason == "max_epochs"


def test_patience_one_stops_after_first_worse_epoch():
    start = zero_params(2, 1, head_bias=5.0)
    train_windows = _constant_windows(8, 4, 1, 0.0, 0.0)
    val_windows = _constant_windows(4, 4, 1, 0.0, 10.0)
    cfg = TrainConfig(learning_rate=0.1, max_epochs=50, patience=1, batch=8, seed=0)
    params, report = train(start, train_windows, val_windows, cfg)
    assert report.epochs_run == 2
    assert report.best_epoch == 1
    assert report.stop_reason == "patience"
    assert report.val_rmse[1] > report.val_rmse[0]

    after_one_epoch, _ = train(start, train_windows, val_windows, TrainConfig(learning_rate=0.1, max_epochs=1, batch=8))
    assert params.head_bias == after_one_epoch.head_bias
    assert start.head_bias == 5.0


def test_training_is_deterministic(rng):
    windows = [
        FeatureWindow(inputs=rng.uniform(size=(6, 2)), targets=rng.uniform(size=6)) for _ in range(20)
    ]
    cfg = TrainConfig(learning_rate=0.01, max_epochs=5, batch=4, seed=8)
    params_a, report_a = train(init_params(3, 2, seed=2), windows[:15], windows[15:], cfg)
    params_b, report_b = train(init_params(3, 2, seed=2), windows[:15], windows[15:], cfg)
    assert report_a.to_csv() == report_b.to_csv()
    for name, tensor in params_a.items():
        np.testing.assert_array_equal(tensor, params_b[name])


def test_report_csv_layout():
    windows = _constant_windows(4, 3, 1, 0.1, 0.2)
    _, report = train(zero_params(1, 1), windows, windows, TrainConfig(max_epochs=3, patience=5))
    lines = report.to_csv().splitlines()
    assert lines[0] == "epoch,train_rmse,val_rmse"
    assert len(lines) == 4
    assert lines[1].startswith("1,")


def test_non_finite_loss_aborts_with_epoch_and_batch():
    windows = [FeatureWindow(inputs=np.zeros((3, 1)), targets=np.array([0.0, np.inf, 0.0]))]
    with pytest.raises(NumericalError, match="epoch 1, batch 1"):
        train(zero_params(1, 1), windows, windows, TrainConfig(max_epochs=2))
