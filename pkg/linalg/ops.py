"""
This module holds the dense arithmetic every numerical package builds on.

Vectors are 1-D float64 numpy arrays and matrices are 2-D row-major (C order)
float64 arrays. Operations also accept a leading batch axis on their vector
operands, so a (B, D) array is treated as B independent vectors.
"""

from typing import Sequence, Union

import numpy as np

from utils.exceptions import NumericalError, ShapeError

ArrayLike = Union[np.ndarray, Sequence[float], Sequence[Sequence[float]]]


def require_finite(values: np.ndarray, what: str) -> np.ndarray:
    """
    Ensure an array holds only finite numbers.

    Args:
        values: The array to check.
        what: Name used in the error message.

    Returns:
        The array itself.

    Raises:
        NumericalError: If any entry is NaN or infinite.
    """
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))
        raise NumericalError(f"{what} holds {len(bad)} non-finite entries, first at index {tuple(bad[0])}")
    return values


def as_vector(data: ArrayLike) -> np.ndarray:
    """
    Build a Vector from a sequence of reals.

    Args:
        data: One-dimensional sequence with at least one entry.

    Returns:
        A contiguous float64 array.
    """
    vector = np.ascontiguousarray(data, dtype=np.float64)
    if vector.ndim != 1 or vector.size < 1:
        raise ShapeError(f"a vector needs one axis and at least one entry, got shape {vector.shape}")
    return require_finite(vector, "vector")


def as_matrix(data: ArrayLike) -> np.ndarray:
    """
    Build a row-major Matrix from nested sequences.

    Args:
        data: Two-dimensional nested sequence.

    Returns:
        A C-contiguous float64 array.
    """
    matrix = np.ascontiguousarray(data, dtype=np.float64)
    if matrix.ndim != 2 or matrix.size < 1:
        raise ShapeError(f"a matrix needs two axes and at least one entry, got shape {matrix.shape}")
    return require_finite(matrix, "matrix")


def affine(W: np.ndarray, x: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Compute W·x + b.

    Args:
        W: Matrix of shape (rows, cols).
        x: Vector of length cols, or a batch of shape (B, cols).
        b: Vector of length rows.

    Returns:
        Vector of length rows, or a batch of shape (B, rows).

    Raises:
        ShapeError: If W.cols != x.len or W.rows != b.len.
    """
    if W.ndim != 2 or b.ndim != 1 or x.ndim not in (1, 2):
        raise ShapeError(f"affine expects W 2-D, x 1-D or 2-D and b 1-D; got W{W.shape}, x{x.shape}, b{b.shape}")
    if W.shape[1] != x.shape[-1] or W.shape[0] != b.shape[0]:
        raise ShapeError(f"affine shape mismatch: W{W.shape} · x{x.shape} + b{b.shape}")
    return x @ W.T + b


def sigmoid(x: np.ndarray) -> np.ndarray:
    """
    Elementwise logistic function 1 / (1 + e^(-x)).

    Evaluated as e^x / (1 + e^x) for negative inputs so that neither branch
    overflows.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    exp_x = np.exp(x[~positive])
    out[~positive] = exp_x / (1.0 + exp_x)
    return out


def tanh_act(x: np.ndarray) -> np.ndarray:
    """Elementwise hyperbolic tangent."""
    return np.tanh(np.asarray(x, dtype=np.float64))


def hadamard(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Elementwise product of two equally shaped arrays.

    Raises:
        ShapeError: If the shapes differ.
    """
    if a.shape != b.shape:
        raise ShapeError(f"hadamard shape mismatch: {a.shape} vs {b.shape}")
    return a * b
