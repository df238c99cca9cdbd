"""Gradient checks and shape rules of the functional kernels."""

import numpy as np
import pytest

from pim_har.errors import ShapeMismatchError
from pim_har.models.network import EncoderSpec
from pim_har.nn import functional as F
from tests.nn.conftest import assert_grad_close, numerical_grad


@pytest.fixture(params=range(10))
def rng(request: pytest.FixtureRequest) -> np.random.Generator:
    return np.random.default_rng(request.param)


@pytest.mark.parametrize("stride", [1, 2])
def test_conv1d_gradients(rng: np.random.Generator, stride: int) -> None:
    """Test conv1d backward against finite differences."""
    x = rng.normal(size=(2, 3, 12))
    w = rng.normal(size=(4, 3, 5))
    b = rng.normal(size=4)
    out, cache = F.conv1d_forward(x, w, b, stride)
    upstream = rng.normal(size=out.shape)

    def loss() -> float:
        return float(np.sum(F.conv1d_forward(x, w, b, stride)[0] * upstream))

    dx, dw, db = F.conv1d_backward(upstream, cache)
    assert_grad_close(dx, numerical_grad(loss, x))
    assert_grad_close(dw, numerical_grad(loss, w))
    assert_grad_close(db, numerical_grad(loss, b))


def test_conv1d_is_cross_correlation() -> None:
    """Test a hand-computed valid cross-correlation without kernel flip."""
    x = np.array([[[1.0, 2.0, 3.0, 4.0]]])
    w = np.array([[[1.0, 0.0, -1.0]]])
    out, _ = F.conv1d_forward(x, w, np.zeros(1))
    np.testing.assert_allclose(out, [[[-2.0, -2.0]]])


def test_conv1d_shape_errors(rng: np.random.Generator) -> None:
    """Test mismatched channels and inputs shorter than the kernel."""
    with pytest.raises(ShapeMismatchError):
        F.conv1d_forward(
            rng.normal(size=(1, 2, 10)), rng.normal(size=(3, 4, 3)), np.zeros(3)
        )
    with pytest.raises(ShapeMismatchError):
        F.conv1d_forward(
            rng.normal(size=(1, 2, 2)), rng.normal(size=(3, 2, 3)), np.zeros(3)
        )


def test_encoder_length_chain() -> None:
    """Test the valid-convolution length chain of a 200-sample window."""
    spec = EncoderSpec()
    assert spec.output_lengths(200) == [177, 162, 155]
    assert spec.min_input_length == 46
    assert spec.output_lengths(46)[-1] == 1
    assert spec.output_lengths(45)[-1] == 0


def test_dense_gradients(rng: np.random.Generator) -> None:
    """Test dense backward against finite differences."""
    x = rng.normal(size=(5, 4))
    w = rng.normal(size=(4, 3))
    b = rng.normal(size=3)
    upstream = rng.normal(size=(5, 3))

    def loss() -> float:
        return float(np.sum(F.dense_forward(x, w, b) * upstream))

    dx, dw, db = F.dense_backward(upstream, x, w)
    assert_grad_close(dx, numerical_grad(loss, x))
    assert_grad_close(dw, numerical_grad(loss, w))
    assert_grad_close(db, numerical_grad(loss, b))


def test_layer_norm_gradients(rng: np.random.Generator) -> None:
    """Test layer norm backward against finite differences."""
    x = rng.normal(size=(4, 6))
    gamma = rng.normal(size=6)
    beta = rng.normal(size=6)
    upstream = rng.normal(size=(4, 6))

    def loss() -> float:
        return float(np.sum(F.layer_norm_forward(x, gamma, beta)[0] * upstream))

    _, cache = F.layer_norm_forward(x, gamma, beta)
    dx, dgamma, dbeta = F.layer_norm_backward(upstream, cache)
    assert_grad_close(dx, numerical_grad(loss, x))
    assert_grad_close(dgamma, numerical_grad(loss, gamma))
    assert_grad_close(dbeta, numerical_grad(loss, beta))


def test_layer_norm_output_statistics(rng: np.random.Generator) -> None:
    """Test zero mean and unit variance rows with identity affine parameters."""
    x = rng.normal(3.0, 2.0, size=(3, 50))
    out, _ = F.layer_norm_forward(x, np.ones(50), np.zeros(50))
    np.testing.assert_allclose(out.mean(axis=1), 0.0, atol=1e-12)
    np.testing.assert_allclose(out.var(axis=1), 1.0, rtol=1e-4)


def test_activation_gradients(rng: np.random.Generator) -> None:
    """Test sigmoid, softmax and ReLU backward passes."""
    x = rng.normal(size=(3, 4))
    x[np.abs(x) < 0.05] = 0.5
    upstream = rng.normal(size=(3, 4))

    for forward, backward in (
        (F.sigmoid, lambda d, y, _: F.sigmoid_backward(d, y)),
        (F.softmax, lambda d, y, _: F.softmax_backward(d, y)),
        (F.relu_forward, lambda d, _, z: F.relu_backward(d, z)),
    ):

        def loss() -> float:
            return float(np.sum(forward(x) * upstream))

        analytic = backward(upstream, forward(x), x)
        assert_grad_close(analytic, numerical_grad(loss, x))


def test_softmax_rows_sum_to_one(rng: np.random.Generator) -> None:
    """Test that softmax produces probability rows even for large logits."""
    probs = F.softmax(np.array([[1000.0, 1000.0, -1000.0], [0.0, 1.0, 2.0]]))
    np.testing.assert_allclose(probs.sum(axis=1), 1.0)
    np.testing.assert_allclose(probs[0], [0.5, 0.5, 0.0])


def test_global_max_pool(rng: np.random.Generator) -> None:
    """Test the pooled values and gradient routing to the argmax."""
    x = rng.normal(size=(2, 3, 7))
    out, idx = F.global_max_pool_forward(x)
    np.testing.assert_allclose(out, x.max(axis=2))
    upstream = rng.normal(size=out.shape)

    def loss() -> float:
        return float(np.sum(F.global_max_pool_forward(x)[0] * upstream))

    dx = F.global_max_pool_backward(upstream, idx, 7)
    assert_grad_close(dx, numerical_grad(loss, x))


def test_global_max_pool_ties_pick_first() -> None:
    """Test that equal maxima route the gradient to the lowest index."""
    x = np.array([[[1.0, 3.0, 3.0]]])
    _, idx = F.global_max_pool_forward(x)
    assert idx.tolist() == [[1]]


def test_dropout_modes(rng: np.random.Generator) -> None:
    """Test evaluation identity and inverted scaling in training."""
    x = np.ones((100, 100))
    out, mask = F.dropout_forward(x, 0.5, train=False, rng=None)
    assert out is x and mask is None
    out, mask = F.dropout_forward(x, 0.5, train=True, rng=rng)
    assert mask is not None
    assert set(np.unique(out).tolist()) <= {0.0, 2.0}
    assert abs(out.mean() - 1.0) < 0.05
    np.testing.assert_array_equal(F.dropout_backward(x, mask), mask)
    with pytest.raises(ValueError):
        F.dropout_forward(x, 0.5, train=True, rng=None)
