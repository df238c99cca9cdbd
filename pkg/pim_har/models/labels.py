"""Models for physics-derived features and their discretized pseudo-labels."""

import math
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .constants import N_BINS


class SpeedFeature(BaseModel):
    """Orientation-independent speed of motion of one sensor over a window."""

    sensor_position: str
    delta_d: float = Field(..., ge=0.0)


class AngleFeature(BaseModel):
    """Sign-weighted mean absolute roll, pitch and yaw of one sensor."""

    sensor_position: str
    delta_r: Tuple[float, float, float]

    @field_validator("delta_r")
    @classmethod
    def validate_range(
        cls, v: Tuple[float, float, float]
    ) -> Tuple[float, float, float]:
        """Validate that every component lies in [-pi, pi]."""
        if any(abs(component) > math.pi for component in v):
            raise ValueError("angle feature components must lie in [-pi, pi]")
        return v


class SymmetryFeature(BaseModel):
    """DTW distance between aligned magnitudes of a limb pair."""

    pair: str
    delta_d_symmetry: float = Field(..., ge=0.0)


class DiscretizerKind(str, Enum):
    """How a discretizer's edges were obtained."""

    FITTED_UNIFORM = "fitted_uniform"
    FIXED_ANGLE = "fixed_angle"


class Discretizer(BaseModel):
    """Maps a real feature value to one of ``n_bins`` half-open intervals.

    ``edges`` holds the ``n_bins - 1`` interior thresholds; values below the
    first edge fall into bin 0 and values at or above the last into the top bin.
    """

    model_config = ConfigDict(frozen=True)

    kind: DiscretizerKind
    n_bins: int = Field(N_BINS, ge=2)
    edges: List[float]

    @model_validator(mode="after")
    def validate_edges(self) -> "Discretizer":
        """Validate edge count and strict monotonicity."""
        if len(self.edges) != self.n_bins - 1:
            raise ValueError(
                f"expected {self.n_bins - 1} edges for {self.n_bins} bins, "
                f"got {len(self.edges)}"
            )
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("discretizer edges must be strictly increasing")
        return self

    def bin_of(self, values: np.ndarray) -> np.ndarray:
        """Vectorized bin lookup with the half-open convention."""
        return np.searchsorted(np.asarray(self.edges), values, side="right")


class DiscretizerSet(BaseModel):
    """Every discretizer needed to turn features into pseudo-labels.

    Keys follow ``speed:<position>``, ``symmetry:<pair>`` and either the shared
    ``angle`` key (fixed thresholds) or ``angle:<position>:<axis>`` (fitted).
    """

    discretizers: Dict[str, Discretizer]
    fingerprint: Optional[str] = None

    def get(self, key: str) -> Discretizer:
        """Return the discretizer registered under ``key``.

        Raises:
            KeyError: If no discretizer was fitted for ``key``
        """
        if key in self.discretizers:
            return self.discretizers[key]
        if key.startswith("angle:") and "angle" in self.discretizers:
            return self.discretizers["angle"]
        raise KeyError(f"No discretizer fitted for {key!r}")


class PseudoLabelSet(BaseModel):
    """Discretized SAM-task targets of one window."""

    model_config = ConfigDict(frozen=True)

    speed_bins: Dict[str, int] = Field(default_factory=dict)
    angle_bins: Dict[str, Tuple[int, int, int]] = Field(default_factory=dict)
    symmetry_bins: Dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_bins(self) -> "PseudoLabelSet":
        """Validate that every bin id lies in [0, N_BINS - 1]."""
        ids = list(self.speed_bins.values()) + list(self.symmetry_bins.values())
        for triple in self.angle_bins.values():
            ids.extend(triple)
        if any(not 0 <= i < N_BINS for i in ids):
            raise ValueError(f"pseudo-label bin ids must lie in [0, {N_BINS - 1}]")
        return self

    def class_counts(self) -> Dict[str, int]:
        """Number of pseudo-classes per family (3·n·11, n·11, d·11)."""
        return {
            "angle": 3 * len(self.angle_bins) * N_BINS,
            "speed": len(self.speed_bins) * N_BINS,
            "symmetry": len(self.symmetry_bins) * N_BINS,
        }


class WindowFeatures(BaseModel):
    """Raw (undiscretized) features of one window."""

    speed: Dict[str, float] = Field(default_factory=dict)
    angle: Dict[str, Tuple[float, float, float]] = Field(default_factory=dict)
    symmetry: Dict[str, float] = Field(default_factory=dict)
