"""Dense float64 vector/matrix helpers and activation functions."""

from .ops import affine, as_matrix, as_vector, hadamard, require_finite, sigmoid, tanh_act

__all__ = ["affine", "as_matrix", "as_vector", "hadamard", "require_finite", "sigmoid", "tanh_act"]
