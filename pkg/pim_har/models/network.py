"""Models describing the encoder, the task heads and the loss weighting."""

from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .constants import (
    CONV_CHANNELS,
    CONV_STRIDE,
    DROPOUT_RATE,
    KERNEL_SIZES,
)


class EncoderSpec(BaseModel):
    """Shared 1-D CNN encoder: valid convolutions, ReLU, dropout, global max pool."""

    model_config = ConfigDict(frozen=True)

    conv_channels: Tuple[int, ...] = CONV_CHANNELS
    kernel_sizes: Tuple[int, ...] = KERNEL_SIZES
    stride: int = Field(CONV_STRIDE, ge=1)
    dropout: float = Field(DROPOUT_RATE, ge=0.0, lt=1.0)
    pooling: str = "global_max"

    @model_validator(mode="after")
    def validate_layers(self) -> "EncoderSpec":
        """Validate that channels and kernels describe the same layers."""
        if len(self.conv_channels) != len(self.kernel_sizes) or not self.conv_channels:
            raise ValueError(
                "conv_channels and kernel_sizes must be non-empty, equal length"
            )
        return self

    @property
    def embedding_dim(self) -> int:
        """Size r of the embedding: global max pooling keeps the last channel count."""
        return self.conv_channels[-1]

    def output_lengths(self, input_length: int) -> List[int]:
        """Time-axis length after each convolution (may go non-positive)."""
        lengths = []
        length = input_length
        for k in self.kernel_sizes:
            length = (length - k) // self.stride + 1
            lengths.append(length)
        return lengths

    @property
    def min_input_length(self) -> int:
        """Shortest window that survives every valid convolution."""
        length = 1
        for k in reversed(self.kernel_sizes):
            length = (length - 1) * self.stride + k
        return length


class HeadTask(str, Enum):
    """What a head predicts."""

    ANGLE = "angle"
    SPEED = "speed"
    SYMMETRY = "symmetry"
    CLASSIFIER = "classifier"


class HeadSpec(BaseModel):
    """One prediction head on top of the shared embedding."""

    model_config = ConfigDict(frozen=True)

    name: str
    task: HeadTask
    source: Optional[str] = None  # sensor position or limb pair
    hidden: Tuple[int, ...] = ()
    output_dim: int = Field(..., ge=1)
    output_nonlinearity: Optional[str] = None


class LossWeights(BaseModel):
    """Weights α, β, γ of the aggregated pre-training loss."""

    alpha: float = 1.0  # symmetry
    beta: float = 1.0  # angle
    gamma: float = 1.0  # motion
