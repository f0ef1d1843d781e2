"""
This module defines the gradient container mirroring LstmParams.
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

import numpy as np

from lstm.params import PARAM_NAMES, LstmParams
from utils.exceptions import ShapeError


@dataclass
class Gradients:
    """
    One gradient array per parameter tensor, keyed like LstmParams.tensors.
    """

    tensors: Dict[str, np.ndarray]

    @classmethod
    def zeros_like(cls, p: LstmParams) -> "Gradients":
        return cls({name: np.zeros_like(tensor) for name, tensor in p.items()})

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def items(self) -> Iterator[Tuple[str, np.ndarray]]:
        for name in PARAM_NAMES:
            yield name, self.tensors[name]

    def global_norm(self) -> float:
        """L2 norm over every entry of every tensor."""
        return math.sqrt(sum(float(np.sum(g * g)) for _, g in self.items()))

    def clip(self, max_norm: float) -> Tuple["Gradients", float]:
        """
        Rescale so the global norm does not exceed max_norm.

        Args:
            max_norm: Norm ceiling, > 0.

        Returns:
            The (possibly rescaled) gradients and the norm before clipping.
        """
        norm = self.global_norm()
        if norm <= max_norm:
            return self, norm
        factor = max_norm / norm
        return Gradients({name: g * factor for name, g in self.tensors.items()}), norm

    def max_relative_error(self, other: "Gradients", floor: float = 1e-8) -> float:
        """
        Largest |a - b| / max(|a|, |b|, floor) over all entries.

        Args:
            other: Gradients of the same shapes.
            floor: Lower bound of the denominator.
        """
        worst = 0.0
        for name, a in self.items():
            b = other[name]
            if a.shape != b.shape:
                raise ShapeError(f"gradient '{name}' shapes differ: {a.shape} vs {b.shape}")
            denominator = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
            worst = max(worst, float(np.max(np.abs(a - b) / denominator)))
        return worst
