"""Models for multi-channel sensor streams and their windows."""

from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .labels import PseudoLabelSet


class Modality(str, Enum):
    """Sensor modality of a channel."""

    ACCEL = "accel"
    GYRO = "gyro"
    MAG = "mag"


class Axis(str, Enum):
    """Sensor axis of a channel."""

    X = "x"
    Y = "y"
    Z = "z"


DEFAULT_UNITS = {
    Modality.ACCEL: "m/s²",
    Modality.GYRO: "rad/s",
    Modality.MAG: "µT",
}


class ChannelSpec(BaseModel):
    """Semantics of one channel: where the sensor sits and what it measures."""

    model_config = ConfigDict(frozen=True)

    sensor_position: str
    modality: Modality
    axis: Axis
    units: str = ""

    @property
    def name(self) -> str:
        """Column name used in CSV files: ``<position>_<modality>_<axis>``."""
        return f"{self.sensor_position}_{self.modality.value}_{self.axis.value}"

    @classmethod
    def from_name(cls, name: str) -> "ChannelSpec":
        """Parse a ``<position>_<modality>_<axis>`` column name.

        Positions may themselves contain underscores (``left_wrist``).

        Raises:
            ValueError: If the name does not follow the schema
        """
        parts = name.strip().rsplit("_", 2)
        if len(parts) != 3 or not parts[0]:
            raise ValueError(
                f"channel name {name!r} is not <position>_<modality>_<axis>"
            )
        position, modality, axis = parts
        spec_modality = Modality(modality)
        return cls(
            sensor_position=position,
            modality=spec_modality,
            axis=Axis(axis),
            units=DEFAULT_UNITS[spec_modality],
        )


def channel_indices(
    layout: Sequence[ChannelSpec], position: str, modality: Modality
) -> Optional[List[int]]:
    """Row indices of the x, y, z channels of ``position``/``modality``.

    Returns:
        The three indices in x, y, z order, or None unless all three exist
    """
    found = {
        spec.axis: i
        for i, spec in enumerate(layout)
        if spec.sensor_position == position and spec.modality == modality
    }
    if set(found) != set(Axis):
        return None
    return [found[Axis.X], found[Axis.Y], found[Axis.Z]]


def sensor_positions(
    layout: Sequence[ChannelSpec], modality: Modality = Modality.ACCEL
) -> List[str]:
    """Positions exposing a full x/y/z triple of ``modality``, in layout order."""
    positions: List[str] = []
    for spec in layout:
        if spec.sensor_position not in positions:
            positions.append(spec.sensor_position)
    return [p for p in positions if channel_indices(layout, p, modality) is not None]


def _validate_layout(layout: Sequence[ChannelSpec]) -> None:
    keys = [(s.sensor_position, s.modality, s.axis) for s in layout]
    if len(set(keys)) != len(keys):
        raise ValueError("(sensor_position, modality, axis) must be unique in a layout")


class MultiChannelSeries(BaseModel):
    """A uniformly sampled multi-channel recording of one subject session."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    data: np.ndarray
    sample_rate_hz: float = Field(..., gt=0)
    layout: List[ChannelSpec]
    subject_id: str
    session_id: str = ""
    labels: Optional[np.ndarray] = None

    @field_validator("data", mode="before")
    @classmethod
    def validate_data(cls, v: object) -> np.ndarray:
        """Coerce to a 2-D floating array [n_channels × n_samples]."""
        arr = np.asarray(v)
        if arr.dtype.kind != "f":
            arr = arr.astype(np.float64)
        if arr.ndim != 2:
            raise ValueError(f"series data must be 2-D, got {arr.ndim}-D")
        return arr

    @model_validator(mode="after")
    def validate_layout(self) -> "MultiChannelSeries":
        """Validate the layout against the data shape."""
        if self.data.shape[0] != len(self.layout):
            raise ValueError(
                f"data has {self.data.shape[0]} channels, layout has {len(self.layout)}"
            )
        _validate_layout(self.layout)
        if self.labels is not None and len(self.labels) != self.n_samples:
            raise ValueError("per-sample labels must match the number of samples")
        return self

    @property
    def n_channels(self) -> int:
        return int(self.data.shape[0])

    @property
    def n_samples(self) -> int:
        return int(self.data.shape[1])

    @property
    def dt(self) -> float:
        """Sampling interval Δs in seconds."""
        return 1.0 / self.sample_rate_hz


class Window(BaseModel):
    """One fixed-length segment with optional activity label and pseudo-labels."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    data: np.ndarray
    label: Optional[int] = None
    pseudo: Optional[PseudoLabelSet] = None
    subject_id: str
    session_id: str = ""
    window_index: int = 0
    augmentation: Optional[str] = None

    @field_validator("data", mode="before")
    @classmethod
    def validate_data(cls, v: object) -> np.ndarray:
        """Coerce to a 2-D floating array [n_c × n_w]."""
        arr = np.asarray(v)
        if arr.dtype.kind != "f":
            arr = arr.astype(np.float64)
        if arr.ndim != 2:
            raise ValueError(f"window data must be 2-D, got {arr.ndim}-D")
        return arr

    @property
    def n_channels(self) -> int:
        return int(self.data.shape[0])

    @property
    def length(self) -> int:
        return int(self.data.shape[1])


class NormalizationStats(BaseModel):
    """Per-channel z-score statistics fitted on a training subset."""

    mean: List[float]
    std: List[float]
    flagged: List[int] = Field(
        default_factory=list,
        description="Zero-variance channels whose std was set to 1",
    )

    @model_validator(mode="after")
    def validate_std(self) -> "NormalizationStats":
        """Validate matching lengths and strictly positive std."""
        if len(self.mean) != len(self.std):
            raise ValueError("mean and std must have one entry per channel")
        if any(s <= 0 for s in self.std):
            raise ValueError("std entries must be strictly positive")
        return self
