"""
This module implements the Adam optimizer over LstmParams.
"""

from typing import Dict

import numpy as np

from lstm.params import LstmParams

from .gradients import Gradients


class Adam:
    """
    Adam with bias-corrected first and second moments.

    Attributes:
        learning_rate: Step size.
        beta1: Decay of the first-moment estimate.
        beta2: Decay of the second-moment estimate.
        eps: Denominator offset.
        t: Number of updates applied so far.
    """

    def __init__(self, learning_rate: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m: Dict[str, np.ndarray] = {}
        self.v: Dict[str, np.ndarray] = {}

    def step(self, params: LstmParams, grads: Gradients) -> None:
        """
        Apply one update to params in place.

        Args:
            params: Parameters to update.
            grads: Gradients of the loss at params.
        """
        self.t += 1
        correction1 = 1.0 - self.beta1**self.t
        correction2 = 1.0 - self.beta2**self.t
        for name, tensor in params.items():
            g = grads[name]
            m = self.m.setdefault(name, np.zeros_like(tensor))
            v = self.v.setdefault(name, np.zeros_like(tensor))
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            tensor -= self.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + self.eps)
