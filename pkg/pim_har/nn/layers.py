"""Stateful layers wrapping the functional kernels, with named parameters."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from pim_har.models.constants import LAYER_NORM_EPS

from . import functional as F


@dataclass
class Parameter:
    """A trainable tensor with its gradient and Adam moments (one shared shape)."""

    value: np.ndarray
    grad: np.ndarray = field(init=False)
    adam_m: np.ndarray = field(init=False)
    adam_v: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.grad = np.zeros_like(self.value)
        self.adam_m = np.zeros_like(self.value)
        self.adam_v = np.zeros_like(self.value)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.value.shape)

    def astype(self, dtype: Any) -> None:
        """Cast every tensor in place to ``dtype``."""
        self.value = self.value.astype(dtype)
        self.grad = self.grad.astype(dtype)
        self.adam_m = self.adam_m.astype(dtype)
        self.adam_v = self.adam_v.astype(dtype)


def kaiming_uniform(
    shape: Tuple[int, ...], fan_in: int, rng: np.random.Generator
) -> np.ndarray:
    """He-uniform initialization for ReLU networks: U(-√(6/fan_in), √(6/fan_in))."""
    bound = np.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Module(ABC):
    """A differentiable block; ``backward`` must follow the matching ``forward``."""

    def parameters(self) -> Dict[str, Parameter]:
        return {}

    @abstractmethod
    def forward(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        pass

    @abstractmethod
    def backward(self, dout: np.ndarray) -> np.ndarray:
        pass


class Conv1d(Module):
    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        kernel_size: int,
        rng: np.random.Generator,
        stride: int = 1,
    ) -> None:
        fan_in = in_channels * kernel_size
        self.stride = stride
        self.weight = Parameter(
            kaiming_uniform((out_channels, in_channels, kernel_size), fan_in, rng)
        )
        self.bias = Parameter(np.zeros(out_channels))
        self._cache: Optional[F.ConvCache] = None

    def parameters(self) -> Dict[str, Parameter]:
        return {"weight": self.weight, "bias": self.bias}

    def forward(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        out, self._cache = F.conv1d_forward(
            x, self.weight.value, self.bias.value, self.stride
        )
        return out

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._cache is not None, "backward called before forward"
        dx, dw, db = F.conv1d_backward(dout, self._cache)
        self.weight.grad += dw
        self.bias.grad += db
        return dx


class Dense(Module):
    def __init__(
        self, in_features: int, out_features: int, rng: np.random.Generator
    ) -> None:
        self.weight = Parameter(
            kaiming_uniform((in_features, out_features), in_features, rng)
        )
        self.bias = Parameter(np.zeros(out_features))
        self._x: Optional[np.ndarray] = None

    def parameters(self) -> Dict[str, Parameter]:
        return {"weight": self.weight, "bias": self.bias}

    def forward(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        self._x = x
        return F.dense_forward(x, self.weight.value, self.bias.value)

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._x is not None, "backward called before forward"
        dx, dw, db = F.dense_backward(dout, self._x, self.weight.value)
        self.weight.grad += dw
        self.bias.grad += db
        return dx


class ReLU(Module):
    def __init__(self) -> None:
        self._x: Optional[np.ndarray] = None

    def forward(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        self._x = x
        return F.relu_forward(x)

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._x is not None, "backward called before forward"
        return F.relu_backward(dout, self._x)


class LayerNorm(Module):
    def __init__(self, features: int, eps: float = LAYER_NORM_EPS) -> None:
        self.eps = eps
        self.gamma = Parameter(np.ones(features))
        self.beta = Parameter(np.zeros(features))
        self._cache: Optional[F.LayerNormCache] = None

    def parameters(self) -> Dict[str, Parameter]:
        return {"gamma": self.gamma, "beta": self.beta}

    def forward(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        out, self._cache = F.layer_norm_forward(
            x, self.gamma.value, self.beta.value, self.eps
        )
        return out

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._cache is not None, "backward called before forward"
        dx, dgamma, dbeta = F.layer_norm_backward(dout, self._cache)
        self.gamma.grad += dgamma
        self.beta.grad += dbeta
        return dx


class Dropout(Module):
    def __init__(self, rate: float) -> None:
        self.rate = rate
        self._mask: Optional[np.ndarray] = None

    def forward(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        out, self._mask = F.dropout_forward(x, self.rate, train, rng)
        return out

    def backward(self, dout: np.ndarray) -> np.ndarray:
        return F.dropout_backward(dout, self._mask)


class GlobalMaxPool1d(Module):
    def __init__(self) -> None:
        self._idx: Optional[np.ndarray] = None
        self._length = 0

    def forward(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        self._length = x.shape[2]
        out, self._idx = F.global_max_pool_forward(x)
        return out

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._idx is not None, "backward called before forward"
        return F.global_max_pool_backward(dout, self._idx, self._length)


class Sequential(Module):
    """Layers applied in order; parameter names are ``<index>.<name>``."""

    def __init__(self, layers: List[Module]) -> None:
        self.layers = layers

    def __iter__(self) -> Iterator[Module]:
        return iter(self.layers)

    def parameters(self) -> Dict[str, Parameter]:
        return {
            f"{i}.{name}": param
            for i, layer in enumerate(self.layers)
            for name, param in layer.parameters().items()
        }

    def forward(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x, train, rng)
        return x

    def backward(self, dout: np.ndarray) -> np.ndarray:
        for layer in reversed(self.layers):
            dout = layer.backward(dout)
        return dout
