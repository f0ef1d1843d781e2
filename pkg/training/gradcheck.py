"""
This module provides the central finite-difference gradient oracle.
"""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from lstm.cell import forward
from lstm.params import LstmParams, param_shapes

from .bptt import bptt
from .gradients import Gradients
from .loss import sequence_mse

DEFAULT_EPSILON = 1e-5
GRADCHECK_TOLERANCE = 1e-5


def finite_diff(
    p: LstmParams, xs: np.ndarray, targets: np.ndarray, eps: float = DEFAULT_EPSILON, loss_on: str = "all"
) -> Gradients:
    """
    Estimate every gradient entry as (L(theta + eps) - L(theta - eps)) / (2 eps).

    L is the MSE of the forward predictions against the targets.

    Args:
        p: Parameters at which to differentiate.
        xs: Input sequence, (T, D) or (T, B, D).
        targets: Targets shaped like the predictions.
        eps: Perturbation size, > 0.
        loss_on: 'all' or 'last'.

    Returns:
        The numerical gradients.
    """
    if eps <= 0:
        raise ValueError(f"finite-difference step must be positive, got {eps}")
    perturbed = p.copy()
    grads = Gradients.zeros_like(p)

    def loss() -> float:
        predictions, _ = forward(perturbed, xs)
        return sequence_mse(predictions, targets, loss_on)

    for name, tensor in perturbed.items():
        flat = tensor.reshape(-1)
        out = grads[name].reshape(-1)
        for k in range(flat.size):
            original = flat[k]
            flat[k] = original + eps
            plus = loss()
            flat[k] = original - eps
            minus = loss()
            flat[k] = original
            out[k] = (plus - minus) / (2.0 * eps)
    return grads


@dataclass
class GradCheckResult:
    """Outcome of a batch of random gradient checks."""

    errors: List[float] = field(default_factory=list)

    @property
    def max_relative_error(self) -> float:
        return max(self.errors) if self.errors else 0.0

    def passed(self, tolerance: float = GRADCHECK_TOLERANCE) -> bool:
        return self.max_relative_error < tolerance


def random_instance(rng: np.random.Generator, max_hidden: int = 4, max_input: int = 3, max_steps: int = 10):
    """
    Draw a small random (params, xs, targets) problem.

    Returns:
        Parameters with every entry drawn from N(0, 0.5^2), inputs from N(0, 1)
        and targets uniform in [-2, 2].
    """
    H = int(rng.integers(1, max_hidden + 1))
    D = int(rng.integers(1, max_input + 1))
    T = int(rng.integers(1, max_steps + 1))
    tensors = {name: rng.normal(0.0, 0.5, size=shape) for name, shape in param_shapes(H, D).items()}
    p = LstmParams(hidden_size=H, input_size=D, tensors=tensors)
    xs = rng.normal(0.0, 1.0, size=(T, D))
    targets = rng.uniform(-2.0, 2.0, size=T)
    return p, xs, targets


def check_gradients(seed: int, instances: int = 20, eps: float = DEFAULT_EPSILON) -> GradCheckResult:
    """
    Compare bptt against finite_diff on seeded random instances.

    Args:
        seed: Seed of the instance generator.
        instances: Number of random problems.
        eps: Finite-difference step.

    Returns:
        The per-instance maximum relative errors.
    """
    rng = np.random.default_rng(seed)
    result = GradCheckResult()
    for n in range(instances):
        p, xs, targets = random_instance(rng)
        _, trace = forward(p, xs)
        analytic = bptt(p, trace, targets)
        numeric = finite_diff(p, xs, targets, eps)
        error = analytic.max_relative_error(numeric)
        result.errors.append(error)
        logging.debug(
            f"Gradient check {n + 1}/{instances}: H={p.hidden_size}, D={p.input_size}, T={len(xs)}, "
            f"max relative error {error:.3e}"
        )
    logging.info(f"Gradient check over {instances} instances: max relative error {result.max_relative_error:.3e}")
    return result
