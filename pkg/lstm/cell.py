"""
This module implements the LSTM cell, sequence unrolling and the regression head.

At every step:

    i_t = sigmoid(I_i x_t + R_i h_{t-1} + b_i)
    f_t = sigmoid(I_f x_t + R_f h_{t-1} + b_f)
    o_t = sigmoid(I_o x_t + R_o h_{t-1} + b_o)
    g_t = tanh(I_c x_t + R_c h_{t-1} + b_c)
    c_t = f_t * c_{t-1} + i_t * g_t
    h_t = o_t * tanh(c_t)
    y_t = w_head . h_t + b_head

All functions also accept a leading batch axis: x of shape (B, D) and states
of shape (B, H).
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from linalg import affine, hadamard, sigmoid, tanh_act
from utils.exceptions import ShapeError

from .params import LstmParams


@dataclass(frozen=True)
class LstmState:
    """
    Hidden output and cell state after one step, with that step's gate activations.

    The gate fields are None for the initial state.
    """

    h: np.ndarray
    c: np.ndarray
    i: Optional[np.ndarray] = None
    f: Optional[np.ndarray] = None
    o: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None

    @classmethod
    def zeros(cls, hidden_size: int, batch: Optional[int] = None) -> "LstmState":
        """The all-zero initial state, optionally batched."""
        shape = (hidden_size,) if batch is None else (batch, hidden_size)
        return cls(h=np.zeros(shape), c=np.zeros(shape))


@dataclass(frozen=True)
class StepTrace:
    """
    Everything backpropagation through time needs from a forward pass.

    Arrays are stacked along a leading time axis of length T.

    Attributes:
        xs: Inputs, shape (T, [B,] D).
        h: Hidden outputs, shape (T, [B,] H).
        c: Cell states, shape (T, [B,] H).
        i, f, o, g: Gate activations, shape (T, [B,] H).
        h0: Initial hidden output.
        c0: Initial cell state.
        predictions: Head outputs, shape (T, [B]).
    """

    xs: np.ndarray
    h: np.ndarray
    c: np.ndarray
    i: np.ndarray
    f: np.ndarray
    o: np.ndarray
    g: np.ndarray
    h0: np.ndarray
    c0: np.ndarray
    predictions: np.ndarray

    def __len__(self) -> int:
        return self.xs.shape[0]

    def final_state(self) -> LstmState:
        return LstmState(h=self.h[-1], c=self.c[-1], i=self.i[-1], f=self.f[-1], o=self.o[-1], g=self.g[-1])


def _check_step_shapes(p: LstmParams, x: np.ndarray, prev: LstmState) -> None:
    if x.shape[-1] != p.input_size:
        raise ShapeError(f"input has {x.shape[-1]} features, parameters expect D={p.input_size}")
    if prev.h.shape[-1] != p.hidden_size or prev.c.shape != prev.h.shape:
        raise ShapeError(
            f"state shapes h{prev.h.shape}, c{prev.c.shape} do not match hidden size H={p.hidden_size}"
        )
    if x.shape[:-1] != prev.h.shape[:-1]:
        raise ShapeError(f"input batch shape {x.shape[:-1]} differs from state batch shape {prev.h.shape[:-1]}")


def _pre_activation(p: LstmParams, gate: str, x: np.ndarray, h_prev: np.ndarray) -> np.ndarray:
    return affine(p[f"input_{gate}"], x, p[f"bias_{gate}"]) + h_prev @ p[f"recurrent_{gate}"].T


def step(p: LstmParams, x: np.ndarray, prev: LstmState) -> LstmState:
    """
    Advance the cell by one time step.

    Args:
        p: Parameters.
        x: Input vector of length D (or a (B, D) batch).
        prev: State after the previous step.

    Returns:
        The new state with this step's gate activations attached.
    """
    x = np.asarray(x, dtype=np.float64)
    _check_step_shapes(p, x, prev)
    i = sigmoid(_pre_activation(p, "i", x, prev.h))
    f = sigmoid(_pre_activation(p, "f", x, prev.h))
    o = sigmoid(_pre_activation(p, "o", x, prev.h))
    g = tanh_act(_pre_activation(p, "c", x, prev.h))
    c = hadamard(f, prev.c) + hadamard(i, g)
    h = hadamard(o, tanh_act(c))
    return LstmState(h=h, c=c, i=i, f=f, o=o, g=g)


def head(p: LstmParams, h: np.ndarray) -> Union[float, np.ndarray]:
    """Regression head w_head . h + b_head."""
    return h @ p["head_weights"] + p.head_bias


def run(
    p: LstmParams, xs: Union[np.ndarray, Sequence[np.ndarray]], initial: Optional[LstmState] = None
) -> StepTrace:
    """
    Unroll the cell over a sequence from a given initial state.

    Args:
        p: Parameters.
        xs: Inputs of shape (T, D) or (T, B, D).
        initial: Starting state; zeros when omitted.

    Returns:
        The full StepTrace.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim not in (2, 3) or xs.shape[0] == 0:
        raise ShapeError(f"expected a non-empty (T, D) or (T, B, D) input sequence, got shape {xs.shape}")
    if initial is None:
        initial = LstmState.zeros(p.hidden_size, batch=xs.shape[1] if xs.ndim == 3 else None)
    states: List[LstmState] = []
    state = initial
    for x in xs:
        state = step(p, x, state)
        states.append(state)
    h = np.stack([s.h for s in states])
    return StepTrace(
        xs=xs,
        h=h,
        c=np.stack([s.c for s in states]),
        i=np.stack([s.i for s in states]),
        f=np.stack([s.f for s in states]),
        o=np.stack([s.o for s in states]),
        g=np.stack([s.g for s in states]),
        h0=initial.h,
        c0=initial.c,
        predictions=head(p, h),
    )


def forward(p: LstmParams, xs: Union[np.ndarray, Sequence[np.ndarray]]) -> Tuple[np.ndarray, StepTrace]:
    """
    Run the network over a sequence starting from h = 0, c = 0.

    Args:
        p: Parameters.
        xs: Inputs of shape (T, D), or (T, B, D) for a batch of sequences.

    Returns:
        The per-step predictions (shape (T,) or (T, B)) and the trace.
    """
    trace = run(p, xs)
    return trace.predictions, trace
