"""The shared encoder with its named heads."""

import hashlib
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from pim_har.errors import ShapeMismatchError
from pim_har.models.config import Precision
from pim_har.models.constants import STREAM_INIT_ENCODER, STREAM_INIT_HEAD
from pim_har.models.network import EncoderSpec, HeadSpec
from pim_har.nn.layers import (
    Conv1d,
    Dense,
    Dropout,
    GlobalMaxPool1d,
    LayerNorm,
    Module,
    Parameter,
    ReLU,
    Sequential,
)


def build_encoder(
    n_channels: int, spec: EncoderSpec, rng: np.random.Generator
) -> Sequential:
    """Valid convolutions with ReLU and dropout, then global max pooling."""
    layers: List[Module] = []
    in_channels = n_channels
    for out_channels, kernel_size in zip(spec.conv_channels, spec.kernel_sizes):
        layers.append(Conv1d(in_channels, out_channels, kernel_size, rng, spec.stride))
        layers.append(ReLU())
        layers.append(Dropout(spec.dropout))
        in_channels = out_channels
    layers.append(GlobalMaxPool1d())
    return Sequential(layers)


def build_head(
    spec: HeadSpec, embedding_dim: int, rng: np.random.Generator
) -> Sequential:
    """Fully connected hidden layers with ReLU, layer-normalized in between.

    A head without hidden layers is a single linear layer.
    """
    layers: List[Module] = []
    in_features = embedding_dim
    for i, hidden in enumerate(spec.hidden):
        layers.append(Dense(in_features, hidden, rng))
        layers.append(ReLU())
        if i < len(spec.hidden) - 1:
            layers.append(LayerNorm(hidden))
        in_features = hidden
    layers.append(Dense(in_features, spec.output_dim, rng))
    return Sequential(layers)


class PimNetwork:
    """Encoder ``R^{n_c × n_w} → R^r`` plus task heads keyed by name."""

    def __init__(
        self,
        n_channels: int,
        encoder_spec: EncoderSpec,
        heads: Sequence[HeadSpec],
        seed: int = 0,
        precision: Precision = Precision.FLOAT64,
    ) -> None:
        """Build and initialize the network from seeded, independent streams.

        The encoder and every head draw from their own stream, so a head's
        initial weights do not depend on which other heads exist.

        Args:
            n_channels: Number of input channels
            encoder_spec: Encoder architecture
            heads: Heads to attach to the embedding
            seed: Initialization seed
            precision: Floating point type of parameters and activations
        """
        self.n_channels = n_channels
        self.encoder_spec = encoder_spec
        self.head_specs = {head.name: head for head in heads}
        self.seed = seed
        self.precision = Precision(precision)
        self.encoder = build_encoder(
            n_channels,
            encoder_spec,
            np.random.default_rng([seed, STREAM_INIT_ENCODER]),
        )
        self.heads: Dict[str, Sequential] = {
            head.name: build_head(
                head,
                encoder_spec.embedding_dim,
                np.random.default_rng([seed, STREAM_INIT_HEAD, _stable_id(head.name)]),
            )
            for head in heads
        }
        if self.precision == Precision.FLOAT32:
            for param in self.parameters().values():
                param.astype(np.float32)

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(self.precision.value)

    def parameters(self, prefix: str = "") -> Dict[str, Parameter]:
        """Every parameter by dotted name, optionally filtered by name prefix."""
        params = {f"encoder.{k}": v for k, v in self.encoder.parameters().items()}
        for name, head in self.heads.items():
            params.update(
                {f"heads.{name}.{k}": v for k, v in head.parameters().items()}
            )
        return {k: v for k, v in params.items() if k.startswith(prefix)}

    def check_input(self, x: np.ndarray) -> None:
        """Raise ShapeMismatchError unless ``x`` is ``[batch, n_channels, n_w]``."""
        if x.ndim != 3 or x.shape[1] != self.n_channels:
            raise ShapeMismatchError(
                f"expected input [batch, {self.n_channels}, n_w], got {x.shape}"
            )
        minimum = self.encoder_spec.min_input_length
        if x.shape[2] < minimum:
            raise ShapeMismatchError(
                f"window length {x.shape[2]} is below the encoder minimum {minimum}"
            )

    def embed(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        """Embedding ``[batch, r]`` of a batch of windows."""
        self.check_input(x)
        return self.encoder.forward(x.astype(self.dtype, copy=False), train, rng)

    def state_dict(self, prefix: str = "") -> Dict[str, np.ndarray]:
        return {k: p.value.copy() for k, p in self.parameters(prefix).items()}

    def load_state_dict(self, values: Dict[str, np.ndarray], prefix: str = "") -> None:
        """Copy parameter values for every name under ``prefix``.

        Raises:
            ShapeMismatchError: If a value is missing or has a different shape
        """
        for name, param in self.parameters(prefix).items():
            if name not in values:
                raise ShapeMismatchError(f"no value for parameter {name!r}")
            value = np.asarray(values[name])
            if value.shape != param.shape:
                raise ShapeMismatchError(
                    f"parameter {name!r} has shape {value.shape}, "
                    f"expected {param.shape}"
                )
            param.value = value.astype(self.dtype, copy=True)

    def weight_hash(self, prefix: str = "") -> str:
        """SHA-256 over the values of the parameters under ``prefix``."""
        digest = hashlib.sha256()
        for name, param in sorted(self.parameters(prefix).items()):
            digest.update(name.encode("utf-8"))
            digest.update(np.ascontiguousarray(param.value).tobytes())
        return digest.hexdigest()

    def describe(self) -> Dict[str, Any]:
        """JSON-serializable architecture, enough to rebuild an empty network."""
        return {
            "n_channels": self.n_channels,
            "encoder": self.encoder_spec.model_dump(mode="json"),
            "heads": [h.model_dump(mode="json") for h in self.head_specs.values()],
            "seed": self.seed,
            "precision": self.precision.value,
        }

    @classmethod
    def from_description(cls, description: Dict[str, Any]) -> "PimNetwork":
        """Rebuild the architecture written by :meth:`describe`."""
        return cls(
            n_channels=int(description["n_channels"]),
            encoder_spec=EncoderSpec.model_validate(description["encoder"]),
            heads=[HeadSpec.model_validate(h) for h in description["heads"]],
            seed=int(description["seed"]),
            precision=Precision(description["precision"]),
        )


def _stable_id(name: str) -> int:
    return int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:4], "little")
