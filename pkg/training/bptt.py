"""
This module computes exact gradients of the sequence MSE by backpropagation through time.
"""

import numpy as np

from lstm.cell import StepTrace
from lstm.params import GATES, LstmParams
from utils.exceptions import ShapeError

from .gradients import Gradients
from .loss import loss_weights


def bptt(p: LstmParams, trace: StepTrace, targets: np.ndarray, loss_on: str = "all") -> Gradients:
    """
    Backpropagate the mean squared error through an unrolled forward pass.

    Args:
        p: Parameters the trace was produced with.
        trace: Trace returned by forward/run.
        targets: Targets shaped like trace.predictions, (T,) or (T, B).
        loss_on: 'all' to score every step, 'last' for the final step only.

    Returns:
        Gradients of the MSE with respect to every parameter.
    """
    targets = np.asarray(targets, dtype=np.float64)
    predictions = trace.predictions
    if targets.shape != predictions.shape:
        raise ShapeError(f"targets shape {targets.shape} does not match trace predictions {predictions.shape}")

    H, D = p.hidden_size, p.input_size
    grads = Gradients.zeros_like(p)
    dy = 2.0 * (predictions - targets) * loss_weights(predictions.shape, loss_on)
    w_head = p["head_weights"]
    dh_next = np.zeros_like(trace.h0)
    dc_next = np.zeros_like(trace.c0)

    for t in reversed(range(len(trace))):
        h_prev = trace.h[t - 1] if t > 0 else trace.h0
        c_prev = trace.c[t - 1] if t > 0 else trace.c0
        i, f, o, g = trace.i[t], trace.f[t], trace.o[t], trace.g[t]
        dy_t = np.asarray(dy[t])

        grads["head_weights"][:] += (dy_t[..., None] * trace.h[t]).reshape(-1, H).sum(axis=0)
        grads["head_bias"][0] += np.sum(dy_t)

        dh = np.multiply.outer(dy_t, w_head) + dh_next
        tanh_c = np.tanh(trace.c[t])
        dc = dh * o * (1.0 - tanh_c**2) + dc_next
        d_pre = {
            "i": (dc * g) * i * (1.0 - i),
            "f": (dc * c_prev) * f * (1.0 - f),
            "o": (dh * tanh_c) * o * (1.0 - o),
            "c": (dc * i) * (1.0 - g**2),
        }
        dc_next = dc * f

        x_rows = trace.xs[t].reshape(-1, D)
        h_rows = h_prev.reshape(-1, H)
        dh_next = np.zeros_like(h_prev)
        for gate in GATES:
            da = d_pre[gate]
            da_rows = da.reshape(-1, H)
            grads[f"input_{gate}"][:] += da_rows.T @ x_rows
            grads[f"recurrent_{gate}"][:] += da_rows.T @ h_rows
            grads[f"bias_{gate}"][:] += da_rows.sum(axis=0)
            dh_next = dh_next + da @ p[f"recurrent_{gate}"]
    return grads
