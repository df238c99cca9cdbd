from typing import Optional

import numpy as np

from pim_har.dsp.correlation import align_by_shift, best_shift
from pim_har.dsp.dtw import dtw_distance
from pim_har.dsp.filters import lowpass
from pim_har.errors import ShapeMismatchError
from pim_har.models.constants import FILTER_CUTOFF_HZ, FILTER_ORDER
from pim_har.models.labels import SymmetryFeature


def magnitude(x: np.ndarray) -> np.ndarray:
    """Per-timestep Euclidean norm over the channel axis."""
    return np.sqrt(np.sum(np.asarray(x, dtype=np.float64) ** 2, axis=0))


def symmetry_feature(
    accel_1: np.ndarray,
    accel_2: np.ndarray,
    sample_rate_hz: float,
    band: Optional[int] = None,
    pair: str = "",
    cutoff_hz: float = FILTER_CUTOFF_HZ,
    order: int = FILTER_ORDER,
) -> SymmetryFeature:
    """DTW distance between the shift-aligned acceleration magnitudes of two limbs.

    Raises:
        ShapeMismatchError: If the two windows differ in shape
        NoOverlapError: If the best shift leaves no overlap
    """
    accel_1 = np.asarray(accel_1, dtype=np.float64)
    accel_2 = np.asarray(accel_2, dtype=np.float64)
    if accel_1.shape != accel_2.shape:
        raise ShapeMismatchError(
            f"limb windows differ in shape: {accel_1.shape} vs {accel_2.shape}"
        )
    m1 = magnitude(lowpass(accel_1, sample_rate_hz, cutoff_hz, order))
    m2 = magnitude(lowpass(accel_2, sample_rate_hz, cutoff_hz, order))
    x1, x2 = align_by_shift(m1, m2, best_shift(m1, m2))
    result = dtw_distance(x1, x2, band=band)
    return SymmetryFeature(pair=pair, delta_d_symmetry=result.distance)
