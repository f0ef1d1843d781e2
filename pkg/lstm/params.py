"""
This module defines the LSTM parameter set and its initialization.

Each of the four gates (input i, forget f, output o and cell candidate c) owns
an input weight matrix (H x D), a recurrent weight matrix (H x H) and a bias
(H). A scalar regression head maps the hidden output to a prediction. With
H = D = 1 the matrices collapse to the scalar per-gate weights of the
textbook single-cell presentation.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from linalg import require_finite
from utils.exceptions import ShapeError

GATES: Tuple[str, ...] = ("i", "f", "o", "c")

PARAM_NAMES: Tuple[str, ...] = (
    tuple(f"input_{g}" for g in GATES)
    + tuple(f"recurrent_{g}" for g in GATES)
    + tuple(f"bias_{g}" for g in GATES)
    + ("head_weights", "head_bias")
)


def param_shapes(hidden_size: int, input_size: int) -> Dict[str, Tuple[int, ...]]:
    """
    Return the expected shape of every parameter tensor.

    Args:
        hidden_size: H.
        input_size: D.

    Returns:
        Mapping from tensor name to shape, in PARAM_NAMES order.
    """
    shapes: Dict[str, Tuple[int, ...]] = {}
    for g in GATES:
        shapes[f"input_{g}"] = (hidden_size, input_size)
    for g in GATES:
        shapes[f"recurrent_{g}"] = (hidden_size, hidden_size)
    for g in GATES:
        shapes[f"bias_{g}"] = (hidden_size,)
    shapes["head_weights"] = (hidden_size,)
    shapes["head_bias"] = (1,)
    return shapes


@dataclass
class LstmParams:
    """
    Weights of a single-layer LSTM with a scalar regression head.

    Attributes:
        hidden_size: Number of hidden units H.
        input_size: Number of input features D.
        tensors: Parameter arrays keyed by the names in PARAM_NAMES.
        seed: Seed the parameters were drawn with, if any.
    """

    hidden_size: int
    input_size: int
    tensors: Dict[str, np.ndarray] = field(repr=False)
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        expected = param_shapes(self.hidden_size, self.input_size)
        if set(self.tensors) != set(expected):
            missing = sorted(set(expected) - set(self.tensors))
            extra = sorted(set(self.tensors) - set(expected))
            raise ShapeError(f"parameter set mismatch: missing {missing}, unexpected {extra}")
        for name, shape in expected.items():
            tensor = np.ascontiguousarray(self.tensors[name], dtype=np.float64)
            if tensor.shape != shape:
                raise ShapeError(f"parameter '{name}' has shape {tensor.shape}, expected {shape}")
            self.tensors[name] = require_finite(tensor, f"parameter '{name}'")

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def items(self) -> Iterator[Tuple[str, np.ndarray]]:
        """Iterate over (name, tensor) pairs in canonical order."""
        for name in PARAM_NAMES:
            yield name, self.tensors[name]

    @property
    def head_bias(self) -> float:
        return float(self.tensors["head_bias"][0])

    def copy(self) -> "LstmParams":
        """Return a deep copy that shares no arrays with this one."""
        return LstmParams(
            hidden_size=self.hidden_size,
            input_size=self.input_size,
            tensors={name: tensor.copy() for name, tensor in self.tensors.items()},
            seed=self.seed,
        )

    def num_parameters(self) -> int:
        return sum(tensor.size for tensor in self.tensors.values())


def init_params(H: int, D: int, seed: int) -> LstmParams:
    """
    Draw a fresh parameter set.

    Weights are uniform in [-1/sqrt(H), 1/sqrt(H)], drawn in PARAM_NAMES order
    from a generator seeded with `seed`. The forget-gate bias starts at 1 and
    every other bias at 0.

    Args:
        H: Hidden size, at least 1.
        D: Input size, at least 1.
        seed: Seed of the generator.

    Returns:
        The initialized LstmParams.
    """
    if H < 1 or D < 1:
        raise ShapeError(f"hidden and input size must be at least 1, got H={H}, D={D}")
    rng = np.random.default_rng(seed)
    bound = 1.0 / np.sqrt(H)
    tensors: Dict[str, np.ndarray] = {}
    for name, shape in param_shapes(H, D).items():
        if name.startswith("bias_") or name == "head_bias":
            tensors[name] = np.zeros(shape)
        else:
            tensors[name] = rng.uniform(-bound, bound, size=shape)
    tensors["bias_f"] = np.ones(H)
    return LstmParams(hidden_size=H, input_size=D, tensors=tensors, seed=seed)


def zero_params(H: int, D: int, head_bias: float = 0.0) -> LstmParams:
    """All-zero parameters, optionally with a non-zero head bias."""
    tensors = {name: np.zeros(shape) for name, shape in param_shapes(H, D).items()}
    tensors["head_bias"][0] = head_bias
    return LstmParams(hidden_size=H, input_size=D, tensors=tensors)
