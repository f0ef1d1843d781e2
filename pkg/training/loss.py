"""
This module implements the training losses.

Gradients are taken of the mean squared error; RMSE is what gets reported.
"""

import math
from typing import Sequence

import numpy as np

from utils.exceptions import ShapeError

LOSS_PLACEMENTS = ("all", "last")


def rmse_loss(pred: Sequence[float], target: Sequence[float]) -> float:
    """
    Root mean squared error sqrt(mean((pred - target)^2)).

    Args:
        pred: Predictions.
        target: Targets, same length as pred.

    Returns:
        The RMSE.

    Raises:
        ShapeError: If the inputs are empty or of different lengths.
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ShapeError(f"prediction shape {pred.shape} differs from target shape {target.shape}")
    if pred.size == 0:
        raise ShapeError("cannot compute RMSE of empty sequences")
    return math.sqrt(float(np.mean((pred - target) ** 2)))


def loss_weights(shape: Sequence[int], loss_on: str = "all") -> np.ndarray:
    """
    Per-element weights turning a squared-error array into its mean.

    Args:
        shape: Shape of the prediction array, time axis first.
        loss_on: 'all' scores every step; 'last' scores only the final step.

    Returns:
        Array of the given shape whose entries sum to 1.
    """
    if loss_on not in LOSS_PLACEMENTS:
        raise ShapeError(f"unknown loss placement '{loss_on}', expected one of {LOSS_PLACEMENTS}")
    weights = np.zeros(shape)
    if loss_on == "all":
        weights[...] = 1.0 / weights.size
    else:
        weights[-1] = 1.0 / weights[-1].size
    return weights


def sequence_mse(pred: np.ndarray, target: np.ndarray, loss_on: str = "all") -> float:
    """
    Mean squared error over the scored steps of a (batch of) sequence(s).

    Args:
        pred: Predictions of shape (T,) or (T, B).
        target: Targets of the same shape.
        loss_on: 'all' or 'last'.
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ShapeError(f"prediction shape {pred.shape} differs from target shape {target.shape}")
    if pred.size == 0:
        raise ShapeError("cannot compute a loss over empty sequences")
    return float(np.sum(loss_weights(pred.shape, loss_on) * (pred - target) ** 2))
