"""Tests for stateful layers, Adam and the checkpoint container."""

import struct
from pathlib import Path

import numpy as np
import pytest

from pim_har.errors import CheckpointError
from pim_har.nn.checkpoint import MAGIC, read_checkpoint, write_checkpoint
from pim_har.nn.layers import (
    Conv1d,
    Dense,
    Dropout,
    GlobalMaxPool1d,
    LayerNorm,
    Parameter,
    ReLU,
    Sequential,
)
from pim_har.nn.optim import AdamState, adam_step, zero_grad
from tests.nn.conftest import assert_grad_close, numerical_grad


def _model(rng: np.random.Generator) -> Sequential:
    return Sequential(
        [
            Conv1d(2, 3, 4, rng),
            ReLU(),
            Dropout(0.0),
            GlobalMaxPool1d(),
            Dense(3, 4, rng),
            LayerNorm(4),
            Dense(4, 2, rng),
        ]
    )


def test_parameter_names() -> None:
    """Test index-prefixed parameter names."""
    names = list(_model(np.random.default_rng(0)).parameters())
    assert names == [
        "0.weight",
        "0.bias",
        "4.weight",
        "4.bias",
        "5.gamma",
        "5.beta",
        "6.weight",
        "6.bias",
    ]


def test_sequential_backward_accumulates_parameter_grads() -> None:
    """Test end-to-end parameter gradients of a small stack."""
    rng = np.random.default_rng(1)
    model = _model(rng)
    x = rng.normal(size=(3, 2, 10))
    upstream = rng.normal(size=(3, 2))

    def loss() -> float:
        return float(np.sum(model.forward(x) * upstream))

    model.forward(x)
    model.backward(upstream)
    for name, param in model.parameters().items():
        analytic = param.grad.copy()
        assert_grad_close(analytic, numerical_grad(loss, param.value))
    zero_grad(model.parameters().values())
    assert all(not p.grad.any() for p in model.parameters().values())


def test_same_generator_same_weights() -> None:
    """Test that initialization is a function of the generator state."""
    a = Dense(5, 3, np.random.default_rng(7))
    b = Dense(5, 3, np.random.default_rng(7))
    np.testing.assert_array_equal(a.weight.value, b.weight.value)
    bound = np.sqrt(6.0 / 5)
    assert np.all(np.abs(a.weight.value) <= bound)


def test_adam_first_step_moves_by_learning_rate() -> None:
    """Test the bias-corrected first step of size lr against the gradient sign."""
    param = Parameter(np.array([1.0, -2.0]))
    param.grad = np.array([0.5, -3.0])
    state = adam_step({"p": param}, AdamState(lr=0.1))
    assert state.step == 1
    np.testing.assert_allclose(param.value, [0.9, -1.9], rtol=1e-6)


def test_adam_minimizes_a_quadratic() -> None:
    """Test convergence on f(w) = ||w - 3||²."""
    param = Parameter(np.zeros(3))
    state = AdamState(lr=0.1)
    for _ in range(500):
        param.grad = 2.0 * (param.value - 3.0)
        state = adam_step({"w": param}, state)
    np.testing.assert_allclose(param.value, 3.0, atol=5e-2)


def test_checkpoint_round_trip(tmp_path: Path) -> None:
    """Test tensors and metadata survive writing and reading."""
    tensors = {"a": np.arange(6.0).reshape(2, 3), "b": np.array([1.5])}
    path = tmp_path / "model.ckpt"
    write_checkpoint(path, tensors, {"epoch": 3, "name": "x"})
    loaded, metadata = read_checkpoint(path)
    assert list(loaded) == ["a", "b"]
    np.testing.assert_array_equal(loaded["a"], tensors["a"])
    assert metadata == {"epoch": 3, "name": "x"}
    assert path.read_bytes()[:8] == MAGIC


def test_checkpoint_rejects_corruption(tmp_path: Path) -> None:
    """Test bad magic, truncation and unsupported versions."""
    path = tmp_path / "model.ckpt"
    write_checkpoint(path, {"a": np.ones(10)}, {})
    raw = path.read_bytes()

    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(b"NOTACKPT" + raw[8:])
    with pytest.raises(CheckpointError):
        read_checkpoint(bad)

    bad.write_bytes(raw[:-8])
    with pytest.raises(CheckpointError):
        read_checkpoint(bad)

    header = b'{"version": 99, "tensors": [], "metadata": {}}'
    bad.write_bytes(MAGIC + struct.pack("<Q", len(header)) + header)
    with pytest.raises(CheckpointError):
        read_checkpoint(bad)

    with pytest.raises(CheckpointError):
        read_checkpoint(tmp_path / "missing.ckpt")
