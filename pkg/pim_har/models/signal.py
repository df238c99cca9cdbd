"""Models for the numerical kernels: IIR filters and DTW results."""

from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class FilterKind(str, Enum):
    """Pass band of a Butterworth filter."""

    LOWPASS = "lowpass"
    HIGHPASS = "highpass"


class IirFilter(BaseModel):
    """Digital IIR filter in transfer-function form, normalized so ``a[0] == 1``."""

    model_config = ConfigDict(frozen=True)

    b: List[float]
    a: List[float]
    order: int = Field(..., ge=1)
    cutoff_hz: float = Field(..., gt=0)
    sample_rate_hz: float = Field(..., gt=0)
    kind: FilterKind = FilterKind.LOWPASS

    @model_validator(mode="after")
    def validate_coefficients(self) -> "IirFilter":
        """Validate coefficient counts and the leading feedback coefficient."""
        if len(self.b) != self.order + 1 or len(self.a) != self.order + 1:
            raise ValueError("coefficient lists must have order + 1 entries")
        if self.a[0] != 1.0:
            raise ValueError("feedback coefficients must be normalized with a[0] == 1")
        return self

    @property
    def poles(self) -> np.ndarray:
        return np.roots(self.a)

    @property
    def is_stable(self) -> bool:
        """True when every pole lies strictly inside the unit circle."""
        return bool(np.all(np.abs(self.poles) < 1.0))

    @property
    def padlen(self) -> int:
        """Edge padding used by zero-phase application."""
        return 3 * max(len(self.a), len(self.b))


class DtwResult(BaseModel):
    """Accumulated DTW cost and, optionally, the optimal warping path."""

    distance: float = Field(..., ge=0.0)
    path: Optional[List[Tuple[int, int]]] = None
