"""Forward and backward kernels of every differentiable operation.

Each ``*_forward`` returns its output together with whatever its ``*_backward``
needs; backward functions return gradients with the shapes of their inputs.
Shapes are explicit: ``[batch, channels, time]`` for sequences and
``[batch, features]`` for vectors.
"""

from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import special

from pim_har.errors import ShapeMismatchError
from pim_har.models.constants import LAYER_NORM_EPS

ConvCache = Tuple[np.ndarray, np.ndarray, int, Tuple[int, int, int]]


def conv1d_forward(
    x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int = 1
) -> Tuple[np.ndarray, ConvCache]:
    """Valid 1-D cross-correlation (no kernel flip, no padding).

    Args:
        x: Input ``[batch, in_ch, length]``
        w: Kernels ``[out_ch, in_ch, k]``
        b: Bias ``[out_ch]``
        stride: Step between output positions

    Returns:
        Output ``[batch, out_ch, (length - k) // stride + 1]`` and the cache

    Raises:
        ShapeMismatchError: If shapes are inconsistent or ``length < k``
    """
    if x.ndim != 3 or w.ndim != 3 or x.shape[1] != w.shape[1]:
        raise ShapeMismatchError(
            f"conv1d input {x.shape} incompatible with kernels {w.shape}"
        )
    if b.shape != (w.shape[0],):
        raise ShapeMismatchError(f"conv1d bias {b.shape} must be ({w.shape[0]},)")
    batch, in_ch, length = x.shape
    out_ch, _, k = w.shape
    if length < k:
        raise ShapeMismatchError(f"input length {length} shorter than kernel {k}")

    windows = sliding_window_view(x, k, axis=2)[:, :, ::stride]
    out_len = windows.shape[2]
    cols = windows.transpose(0, 2, 1, 3).reshape(batch, out_len, in_ch * k)
    out = cols @ w.reshape(out_ch, in_ch * k).T + b
    return out.transpose(0, 2, 1), (cols, w, stride, x.shape)


def conv1d_backward(
    dout: np.ndarray, cache: ConvCache
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of :func:`conv1d_forward` with respect to x, w and b."""
    cols, w, stride, x_shape = cache
    batch, in_ch, length = x_shape
    out_ch, _, k = w.shape
    out_len = cols.shape[1]
    if dout.shape != (batch, out_ch, out_len):
        raise ShapeMismatchError(
            f"conv1d upstream gradient {dout.shape} != {(batch, out_ch, out_len)}"
        )

    dout_t = dout.transpose(0, 2, 1)  # [batch, out_len, out_ch]
    dw = (dout_t.reshape(-1, out_ch).T @ cols.reshape(-1, in_ch * k)).reshape(w.shape)
    db = dout.sum(axis=(0, 2))
    dcols = (dout_t @ w.reshape(out_ch, in_ch * k)).reshape(batch, out_len, in_ch, k)

    dx = np.zeros(x_shape, dtype=dout.dtype)
    stop = stride * (out_len - 1) + 1
    for j in range(k):
        dx[:, :, j : j + stop : stride] += dcols[:, :, :, j].transpose(0, 2, 1)
    return dx, dw, db


def dense_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Affine map ``x @ w + b`` with ``w`` of shape ``[in, out]``."""
    if (
        x.ndim != 2
        or w.ndim != 2
        or x.shape[1] != w.shape[0]
        or b.shape != (w.shape[1],)
    ):
        raise ShapeMismatchError(
            f"dense input {x.shape} incompatible with weights {w.shape}/{b.shape}"
        )
    return x @ w + b


def dense_backward(
    dout: np.ndarray, x: np.ndarray, w: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    if dout.shape != (x.shape[0], w.shape[1]):
        raise ShapeMismatchError(f"dense upstream gradient has shape {dout.shape}")
    return dout @ w.T, x.T @ dout, dout.sum(axis=0)


def relu_forward(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(dout: np.ndarray, x: np.ndarray) -> np.ndarray:
    return dout * (x > 0)


def sigmoid(x: np.ndarray) -> np.ndarray:
    return special.expit(x)


def sigmoid_backward(dout: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gradient through a sigmoid given its output ``y``."""
    return dout * y * (1.0 - y)


def softmax(x: np.ndarray) -> np.ndarray:
    """Row-wise softmax over the last axis."""
    return special.softmax(x, axis=-1)


def softmax_backward(dout: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gradient through a softmax given its output ``y``."""
    return y * (dout - np.sum(dout * y, axis=-1, keepdims=True))


LayerNormCache = Tuple[np.ndarray, np.ndarray, np.ndarray]


def layer_norm_forward(
    x: np.ndarray, gamma: np.ndarray, beta: np.ndarray, eps: float = LAYER_NORM_EPS
) -> Tuple[np.ndarray, LayerNormCache]:
    """Normalize over the last axis, then scale by ``gamma`` and shift by ``beta``."""
    if gamma.shape != (x.shape[-1],) or beta.shape != gamma.shape:
        raise ShapeMismatchError(
            f"layer norm parameters {gamma.shape} do not match features {x.shape[-1]}"
        )
    mean = x.mean(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(x.var(axis=-1, keepdims=True) + eps)
    x_hat = (x - mean) * inv_std
    return gamma * x_hat + beta, (x_hat, inv_std, gamma)


def layer_norm_backward(
    dout: np.ndarray, cache: LayerNormCache
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    x_hat, inv_std, gamma = cache
    n = x_hat.shape[-1]
    dx_hat = dout * gamma
    dx = (inv_std / n) * (
        n * dx_hat
        - dx_hat.sum(axis=-1, keepdims=True)
        - x_hat * np.sum(dx_hat * x_hat, axis=-1, keepdims=True)
    )
    reduce_axes = tuple(range(dout.ndim - 1))
    return dx, np.sum(dout * x_hat, axis=reduce_axes), dout.sum(axis=reduce_axes)


def dropout_forward(
    x: np.ndarray, rate: float, train: bool, rng: Optional[np.random.Generator]
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Inverted dropout: kept units are scaled by ``1 / (1 - rate)`` in training.

    Evaluation mode (or ``rate == 0``) is the identity.
    """
    if not train or rate == 0.0:
        return x, None
    if rng is None:
        raise ValueError("training-mode dropout needs an explicit random generator")
    mask = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return x * mask, mask


def dropout_backward(dout: np.ndarray, mask: Optional[np.ndarray]) -> np.ndarray:
    return dout if mask is None else dout * mask


def global_max_pool_forward(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Max over the time axis of ``[batch, channels, time]`` (ties: lowest index)."""
    if x.ndim != 3:
        raise ShapeMismatchError(f"global max pool expects 3-D input, got {x.shape}")
    idx = np.argmax(x, axis=2)
    return np.take_along_axis(x, idx[:, :, None], axis=2)[:, :, 0], idx


def global_max_pool_backward(
    dout: np.ndarray, idx: np.ndarray, length: int
) -> np.ndarray:
    dx = np.zeros(dout.shape + (length,), dtype=dout.dtype)
    np.put_along_axis(dx, idx[:, :, None], dout[:, :, None], axis=2)
    return dx
