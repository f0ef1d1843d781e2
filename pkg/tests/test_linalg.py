import numpy as np
import pytest

from linalg import affine, as_matrix, as_vector, hadamard, require_finite, sigmoid, tanh_act
from utils.exceptions import NumericalError, ShapeError


def test_affine_matches_matrix_vector_product():
    W = as_matrix([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    x = as_vector([1.0, -1.0])
    b = as_vector([0.5, 0.0, -0.5])
    np.testing.assert_array_equal(affine(W, x, b), [-0.5, -1.0, -1.5])


def test_affine_accepts_a_batch_of_vectors(rng):
    W = rng.normal(size=(4, 3))
    b = rng.normal(size=4)
    xs = rng.normal(size=(5, 3))
    batched = affine(W, xs, b)
    assert batched.shape == (5, 4)
    for row, x in zip(batched, xs):
        np.testing.assert_allclose(row, W @ x + b, rtol=0, atol=1e-12)


def test_affine_shape_mismatch_names_both_shapes():
    with pytest.raises(ShapeError, match=r"\(3, 2\).*\(4,\)"):
        affine(np.zeros((3, 2)), np.zeros(4), np.zeros(3))
    with pytest.raises(ShapeError):
        affine(np.zeros((3, 2)), np.zeros(2), np.zeros(2))


def test_shape_error_is_a_value_error():
    with pytest.raises(ValueError):
        hadamard(np.zeros(2), np.zeros(3))


def test_sigmoid_is_stable_at_extremes():
    values = sigmoid(np.array([-1000.0, -1.0, 0.0, 1.0, 1000.0]))
    assert np.all(np.isfinite(values))
    assert values[0] == 0.0 and values[-1] == 1.0
    assert values[2] == 0.5
    np.testing.assert_allclose(values[1] + values[3], 1.0, rtol=0, atol=1e-15)


def test_tanh_and_hadamard():
    np.testing.assert_array_equal(tanh_act(np.zeros(3)), np.zeros(3))
    np.testing.assert_array_equal(hadamard(np.array([1.0, 2.0]), np.array([3.0, 4.0])), [3.0, 8.0])


def test_constructors_reject_bad_input():
    with pytest.raises(ShapeError):
        as_vector([])
    with pytest.raises(ShapeError):
        as_matrix([1.0, 2.0])
    with pytest.raises(NumericalError, match="non-finite"):
        require_finite(np.array([1.0, np.nan]), "weights")


def test_sigmoid_and_tanh_reference_values():
    log3 = np.log(3.0)
    assert sigmoid(np.array([-log3]))[0] == pytest.approx(0.25, abs=1e-15)
    assert tanh_act(np.array([log3]))[0] == pytest.approx(0.8, abs=1e-15)


def test_sigmoid_is_symmetric_and_related_to_tanh(rng):
    x = rng.uniform(-50.0, 50.0, size=1000)
    np.testing.assert_allclose(sigmoid(x) + sigmoid(-x), 1.0, rtol=0, atol=1e-15)
    np.testing.assert_allclose(tanh_act(x), 2.0 * sigmoid(2.0 * x) - 1.0, rtol=0, atol=1e-14)


def test_activations_stay_finite_and_in_range(rng):
    x = np.concatenate([rng.uniform(-1e3, 1e3, size=1000), [-1e3, 1e3, 0.0]])
    s, t = sigmoid(x), tanh_act(x)
    assert np.isfinite(s).all() and np.isfinite(t).all()
    assert ((s >= 0.0) & (s <= 1.0)).all()
    assert ((t >= -1.0) & (t <= 1.0)).all()


def test_affine_is_linear_in_its_input(rng):
    W = rng.normal(size=(5, 4))
    zero = np.zeros(5)
    for _ in range(50):
        x, y = rng.normal(size=4), rng.normal(size=4)
        alpha, beta = rng.uniform(-10.0, 10.0, size=2)
        np.testing.assert_allclose(
            affine(W, alpha * x + beta * y, zero),
            alpha * affine(W, x, zero) + beta * affine(W, y, zero),
            rtol=1e-12,
            atol=1e-11,
        )
