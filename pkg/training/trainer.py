"""
This module contains the validation-driven training loop.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from features.windows import FeatureWindow, stack_windows
from lstm.cell import forward
from lstm.params import LstmParams
from utils.exceptions import ConfigError, DataError, NumericalError

from .bptt import bptt
from .loss import LOSS_PLACEMENTS, sequence_mse
from .optimizer import Adam


@dataclass
class TrainConfig:
    """
    Hyperparameters of one training run.

    Attributes:
        learning_rate: Adam step size.
        max_epochs: Upper bound on passes over the training windows.
        patience: Epochs without validation improvement before stopping.
        grad_clip_norm: Ceiling of the global gradient norm.
        batch: Windows per update.
        seed: Seed of the shuffling generator.
        loss_on: 'all' to score every step of a window, 'last' for the final step only.
        log_every: Log a progress line every this many epochs.
    """

    learning_rate: float = 1e-3
    max_epochs: int = 500
    patience: int = 20
    grad_clip_norm: float = 1.0
    batch: int = 32
    seed: int = 0
    loss_on: str = "all"
    log_every: int = 10

    def __post_init__(self) -> None:
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.patience < 1:
            raise ConfigError(f"patience must be at least 1, got {self.patience}")
        if not self.grad_clip_norm > 0:
            raise ConfigError(f"grad_clip_norm must be positive, got {self.grad_clip_norm}")
        if self.batch < 1 or self.max_epochs < 1:
            raise ConfigError(f"batch and max_epochs must be at least 1, got {self.batch} and {self.max_epochs}")
        if self.loss_on not in LOSS_PLACEMENTS:
            raise ConfigError(f"loss_on must be one of {LOSS_PLACEMENTS}, got '{self.loss_on}'")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class TrainReport:
    """
    Loss curves and stopping information of a training run.

    Attributes:
        train_rmse: Training RMSE per epoch (normalized units).
        val_rmse: Validation RMSE per epoch.
        best_epoch: 1-based epoch with the lowest validation RMSE.
        stop_reason: 'patience' or 'max_epochs'.
    """

    train_rmse: List[float] = field(default_factory=list)
    val_rmse: List[float] = field(default_factory=list)
    best_epoch: int = 0
    stop_reason: str = ""

    @property
    def epochs_run(self) -> int:
        return len(self.train_rmse)

    @property
    def best_val_rmse(self) -> float:
        return self.val_rmse[self.best_epoch - 1]

    def to_csv(self) -> str:
        """Render the report as CSV with header epoch,train_rmse,val_rmse."""
        frame = pd.DataFrame(
            {
                "epoch": np.arange(1, self.epochs_run + 1),
                "train_rmse": np.asarray(self.train_rmse, dtype=np.float64),
                "val_rmse": np.asarray(self.val_rmse, dtype=np.float64),
            }
        )
        return frame.to_csv(index=False, lineterminator="\n")


def _as_sequence_batch(inputs: np.ndarray, targets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # (N, L, D) windows -> (L, N, D) time-major batch
    return inputs.transpose(1, 0, 2), targets.T


def evaluate_rmse(p: LstmParams, inputs: np.ndarray, targets: np.ndarray, loss_on: str = "all") -> float:
    """
    RMSE of a parameter set over stacked windows.

    Args:
        p: Parameters.
        inputs: Window inputs of shape (N, L, D).
        targets: Window targets of shape (N, L).
        loss_on: 'all' or 'last'.
    """
    xs, ys = _as_sequence_batch(inputs, targets)
    predictions, _ = forward(p, xs)
    return math.sqrt(sequence_mse(predictions, ys, loss_on))


def train(
    p: LstmParams,
    train_windows: Sequence[FeatureWindow],
    val_windows: Sequence[FeatureWindow],
    cfg: TrainConfig,
) -> Tuple[LstmParams, TrainReport]:
    """
    Fit parameters with Adam on shuffled mini-batches and early stopping.

    Each epoch shuffles the training windows with a generator seeded from
    cfg.seed, clips the global gradient norm of every batch and applies one
    Adam update per batch. Training stops once the validation RMSE has not
    improved for cfg.patience epochs.

    Args:
        p: Starting parameters; not modified.
        train_windows: Training examples.
        val_windows: Validation examples.
        cfg: Hyperparameters.

    Returns:
        The parameters of the best validation epoch and the TrainReport.

    Raises:
        NumericalError: If a batch or validation loss is not finite.
    """
    if not train_windows or not val_windows:
        raise DataError(f"need training and validation windows, got {len(train_windows)} and {len(val_windows)}")
    inputs, targets = stack_windows(train_windows)
    val_inputs, val_targets = stack_windows(val_windows)
    logging.info(
        f"Training H={p.hidden_size}, D={p.input_size} on {len(inputs)} windows "
        f"({len(val_inputs)} validation) for up to {cfg.max_epochs} epochs"
    )

    rng = np.random.default_rng(cfg.seed)
    params = p.copy()
    optimizer = Adam(cfg.learning_rate)
    report = TrainReport()
    best_params = params.copy()
    best_val = math.inf
    epochs_without_improvement = 0

    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(len(inputs))
        weighted_mse = 0.0
        for batch_number, start in enumerate(range(0, len(order), cfg.batch), start=1):
            indices = order[start : start + cfg.batch]
            xs, ys = _as_sequence_batch(inputs[indices], targets[indices])
            predictions, trace = forward(params, xs)
            loss = sequence_mse(predictions, ys, cfg.loss_on)
            if not math.isfinite(loss):
                raise NumericalError(f"non-finite training loss at epoch {epoch}, batch {batch_number}")
            grads, norm = bptt(params, trace, ys, cfg.loss_on).clip(cfg.grad_clip_norm)
            optimizer.step(params, grads)
            weighted_mse += loss * len(indices)
            logging.debug(f"Epoch {epoch} batch {batch_number}: loss {loss:.6f}, gradient norm {norm:.4f}")

        train_rmse = math.sqrt(weighted_mse / len(inputs))
        val_rmse = evaluate_rmse(params, val_inputs, val_targets, cfg.loss_on)
        if not math.isfinite(val_rmse):
            raise NumericalError(f"non-finite validation loss at epoch {epoch}")
        report.train_rmse.append(train_rmse)
        report.val_rmse.append(val_rmse)

        if val_rmse < best_val:
            best_val = val_rmse
            best_params = params.copy()
            report.best_epoch = epoch
            epochs_without_improvement = 0
        else:
            epochs_without_improvement += 1

        if epoch % cfg.log_every == 0 or epoch == 1:
            logging.info(f"Epoch {epoch}: train RMSE {train_rmse:.5f}, validation RMSE {val_rmse:.5f}")

        if epochs_without_improvement >= cfg.patience:
            report.stop_reason = "patience"
            logging.info(
                f"Early stop at epoch {epoch}; best validation RMSE {best_val:.5f} at epoch {report.best_epoch}"
            )
            break
    else:
        report.stop_reason = "max_epochs"
        logging.info(
            f"Reached {cfg.max_epochs} epochs; best validation RMSE {best_val:.5f} at epoch {report.best_epoch}"
        )

    return best_params, report
