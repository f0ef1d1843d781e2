"""Single-layer LSTM with a scalar regression head."""

from .cell import LstmState, StepTrace, forward, head, run, step
from .forecast import HORIZON_3_DAY, HORIZON_15_DAY, STEPS_PER_DAY, forecast_closed_loop
from .params import GATES, PARAM_NAMES, LstmParams, init_params, param_shapes, zero_params
from .serialization import ForecastModel, dumps_model, load_model, loads_model, save_model

__all__ = [
    "GATES",
    "HORIZON_15_DAY",
    "HORIZON_3_DAY",
    "PARAM_NAMES",
    "STEPS_PER_DAY",
    "ForecastModel",
    "LstmParams",
    "LstmState",
    "StepTrace",
    "dumps_model",
    "forecast_closed_loop",
    "forward",
    "head",
    "init_params",
    "load_model",
    "loads_model",
    "param_shapes",
    "run",
    "save_model",
    "step",
    "zero_params",
]
