"""Uniform and fixed-width binning of SAM features."""

from typing import Dict, Sequence, Union

import numpy as np
from sklearn.preprocessing import KBinsDiscretizer

from pim_har.errors import DegenerateRangeError, EmptyInputError
from pim_har.models.config import SamTask
from pim_har.models.constants import ANGLE_AXES, ANGLE_BIN_WIDTH, N_BINS
from pim_har.models.labels import (
    Discretizer,
    DiscretizerKind,
    DiscretizerSet,
    WindowFeatures,
)

ANGLE_KEY = "angle"


def fit_uniform_discretizer(
    values: Union[Sequence[float], np.ndarray], n_bins: int = N_BINS
) -> Discretizer:
    """Equal-width bins spanning ``[min(values), max(values)]``.

    Raises:
        EmptyInputError: If ``values`` is empty
        DegenerateRangeError: If all values are equal
    """
    arr = np.asarray(values, dtype=np.float64).reshape(-1, 1)
    if arr.size == 0:
        raise EmptyInputError("cannot fit a discretizer on zero values")
    if arr.max() == arr.min():
        raise DegenerateRangeError(
            f"cannot fit uniform bins on a constant feature ({arr.min()})"
        )
    binner = KBinsDiscretizer(n_bins=n_bins, encode="ordinal", strategy="uniform")
    binner.fit(arr)
    edges = binner.bin_edges_[0][1:-1]
    return Discretizer(
        kind=DiscretizerKind.FITTED_UNIFORM, n_bins=n_bins, edges=edges.tolist()
    )


def fixed_angle_discretizer() -> Discretizer:
    """Ten thresholds ``-π + k·2π/10`` (k = 1..10) over the angle range.

    Values at +π land in the top bin, everything below ``-π + 2π/10`` in bin 0.
    """
    edges = (np.arange(1, N_BINS) - 5) * ANGLE_BIN_WIDTH
    edges[-1] = np.pi
    return Discretizer(
        kind=DiscretizerKind.FIXED_ANGLE, n_bins=N_BINS, edges=edges.tolist()
    )


def discretize(d: Discretizer, v: float) -> int:
    """Bin id of ``v``: half-open intervals, clamped to ``[0, n_bins - 1]``."""
    return int(d.bin_of(np.asarray(v, dtype=np.float64)))


def fit_discretizers(
    features: Sequence[WindowFeatures],
    tasks: Sequence[SamTask],
    angle_binning: str = "fixed",
    n_bins: int = N_BINS,
) -> DiscretizerSet:
    """Fit one discretizer per feature, sensor and pair on a pre-training corpus.

    Raises:
        EmptyInputError: If no features are given
        DegenerateRangeError: If a fitted feature is constant over the corpus
    """
    if not features:
        raise EmptyInputError("cannot fit discretizers without features")
    fitted: Dict[str, Discretizer] = {}
    first = features[0]

    if SamTask.MOTION in tasks:
        for position in first.speed:
            values = [f.speed[position] for f in features]
            fitted[f"speed:{position}"] = fit_uniform_discretizer(values, n_bins)

    if SamTask.SYMMETRY in tasks:
        for pair in first.symmetry:
            values = [f.symmetry[pair] for f in features]
            fitted[f"symmetry:{pair}"] = fit_uniform_discretizer(values, n_bins)

    if SamTask.ANGLE in tasks and first.angle:
        if angle_binning == "fixed":
            fitted[ANGLE_KEY] = fixed_angle_discretizer()
        else:
            for position in first.angle:
                for axis_index, axis in enumerate(ANGLE_AXES):
                    values = [f.angle[position][axis_index] for f in features]
                    fitted[f"angle:{position}:{axis}"] = fit_uniform_discretizer(
                        values, n_bins
                    )
    return DiscretizerSet(discretizers=fitted)
