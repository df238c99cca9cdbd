"""Window augmentations that keep the pseudo-labels of their source window."""

from typing import Sequence, Union

import numpy as np
from scipy.interpolate import CubicSpline

from pim_har.errors import InvalidSegmentsError
from pim_har.models.constants import PERMUTE_SEGMENTS, WARP_KNOTS, WARP_SIGMA
from pim_har.models.series import Window

Seed = Union[int, np.random.SeedSequence]

# Keeps the warped clock strictly increasing
MIN_WARP_SPEED = 1e-3


def segment_bounds(length: int, n_segments: int) -> np.ndarray:
    """Start offsets of ``n_segments`` chunks plus the end.

    The last chunk absorbs the remainder.

    Raises:
        InvalidSegmentsError: If ``n_segments`` is below 2 or above ``length``
    """
    if n_segments < 2 or n_segments > length:
        raise InvalidSegmentsError(
            f"cannot split {length} samples into {n_segments} segments"
        )
    size = length // n_segments
    bounds = np.arange(n_segments + 1) * size
    bounds[-1] = length
    return bounds


def permute_by_order(w: Window, n_segments: int, order: Sequence[int]) -> Window:
    """Reassemble the chunks of ``w`` in ``order``; all channels move together."""
    bounds = segment_bounds(w.length, n_segments)
    chunks = [w.data[:, bounds[i] : bounds[i + 1]] for i in order]
    return w.model_copy(
        update={"data": np.concatenate(chunks, axis=1), "augmentation": "permute"}
    )


def permute_segments(
    w: Window, n_segments: int = PERMUTE_SEGMENTS, seed: Seed = 0
) -> Window:
    """Shuffle the order of ``n_segments`` contiguous chunks of the window.

    Raises:
        InvalidSegmentsError: If ``n_segments`` is below 2 or above the length
    """
    segment_bounds(w.length, n_segments)
    order = np.random.default_rng(seed).permutation(n_segments)
    return permute_by_order(w, n_segments, order)


def time_warp(
    w: Window, knots: int = WARP_KNOTS, sigma: float = WARP_SIGMA, seed: Seed = 0
) -> Window:
    """Resample the window along a smooth random monotone clock.

    The local speed of the clock is a cubic spline through ``knots`` values
    drawn from N(1, sigma²). Its running sum, rescaled to span the window, gives
    the sample times at which every channel is linearly interpolated.
    """
    if knots < 2:
        raise ValueError("time_warp needs at least two knots")
    n = w.length
    rng = np.random.default_rng(seed)
    knot_times = np.linspace(0.0, n - 1, knots)
    speeds = rng.normal(1.0, sigma, size=knots)
    speed = np.clip(CubicSpline(knot_times, speeds)(np.arange(n)), MIN_WARP_SPEED, None)
    clock = np.concatenate([[0.0], np.cumsum(speed[:-1])])
    if clock[-1] > 0:
        clock *= (n - 1) / clock[-1]
    grid = np.arange(n, dtype=float)
    warped = np.stack([np.interp(clock, grid, channel) for channel in w.data])
    return w.model_copy(update={"data": warped, "augmentation": "time_warp"})


def horizontal_flip(w: Window) -> Window:
    """Reverse the time axis of every channel."""
    return w.model_copy(
        update={"data": w.data[:, ::-1].copy(), "augmentation": "flip"}
    )
