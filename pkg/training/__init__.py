"""Loss, backpropagation through time, gradient checking and the training loop."""

from .bptt import bptt
from .gradcheck import GRADCHECK_TOLERANCE, GradCheckResult, check_gradients, finite_diff, random_instance
from .gradients import Gradients
from .loss import loss_weights, rmse_loss, sequence_mse
from .optimizer import Adam
from .trainer import TrainConfig, TrainReport, evaluate_rmse, train

__all__ = [
    "GRADCHECK_TOLERANCE",
    "Adam",
    "GradCheckResult",
    "Gradients",
    "TrainConfig",
    "TrainReport",
    "bptt",
    "check_gradients",
    "evaluate_rmse",
    "finite_diff",
    "loss_weights",
    "random_instance",
    "rmse_loss",
    "sequence_mse",
    "train",
]
