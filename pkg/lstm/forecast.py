"""
This module produces multi-step forecasts by feeding predictions back as inputs.
"""

import logging

import numpy as np

from features.scaler import ScalerParams, unscale
from utils.exceptions import ShapeError

from .cell import head, run, step
from .params import LstmParams

STEPS_PER_DAY = 48
HORIZON_3_DAY = 3 * STEPS_PER_DAY
HORIZON_15_DAY = 15 * STEPS_PER_DAY


def forecast_closed_loop(
    p: LstmParams,
    warmup: np.ndarray,
    future_exogenous: np.ndarray,
    horizon: int,
    scaler: ScalerParams,
) -> np.ndarray:
    """
    Forecast `horizon` steps ahead with iterated one-step predictions.

    The network first runs over the observed warmup inputs. The prediction of
    the last warmup step is the first forecast value. Every following input is
    built from the previous normalized prediction plus the known exogenous
    features of that step.

    Args:
        p: Trained parameters.
        warmup: Observed inputs of shape (W, D), consumption in column 0.
        future_exogenous: Exogenous features (temperature and/or time, already
            normalized) of shape (horizon, D - 1). Row k belongs to the k-th
            forecast step; the last row is only used for its length check.
        horizon: Number of steps to forecast.
        scaler: Consumption scaler used to return values in kWh.

    Returns:
        Forecast consumption in kWh, shape (horizon,).
    """
    warmup = np.asarray(warmup, dtype=np.float64)
    future_exogenous = np.asarray(future_exogenous, dtype=np.float64)
    if warmup.ndim != 2 or warmup.shape[0] == 0:
        raise ShapeError(f"warmup must be a non-empty (W, D) array, got shape {warmup.shape}")
    if horizon == 0:
        return np.empty(0)
    if future_exogenous.ndim == 1:
        future_exogenous = future_exogenous.reshape(-1, 1)
    if future_exogenous.shape[0] != horizon:
        raise ShapeError(f"got {future_exogenous.shape[0]} rows of future exogenous features for horizon {horizon}")
    if future_exogenous.shape[1] != p.input_size - 1:
        raise ShapeError(
            f"future exogenous features have {future_exogenous.shape[1]} columns, model expects {p.input_size - 1}"
        )

    trace = run(p, warmup)
    state = trace.final_state()
    predictions = np.empty(horizon)
    predictions[0] = trace.predictions[-1]
    for k in range(1, horizon):
        x = np.concatenate(([predictions[k - 1]], future_exogenous[k - 1]))
        state = step(p, x, state)
        predictions[k] = head(p, state.h)
    logging.debug(f"Closed-loop forecast of {horizon} steps after {warmup.shape[0]} warmup steps")
    return unscale(predictions, scaler)
