"""Per-channel z-score normalization fitted on a training subset."""

from typing import Sequence

import numpy as np

from pim_har.errors import EmptyInputError, ShapeMismatchError
from pim_har.logger import io_logger as logger
from pim_har.models.series import NormalizationStats, Window


def fit_normalization(train_windows: Sequence[Window]) -> NormalizationStats:
    """Fit per-channel mean and standard deviation over every training sample.

    Zero-variance channels get ``std = 1`` and are listed in ``flagged``.

    Raises:
        EmptyInputError: If no windows are given
        ShapeMismatchError: If windows disagree on their channel count
    """
    if not train_windows:
        raise EmptyInputError("cannot fit normalization on an empty window list")
    n_channels = train_windows[0].n_channels
    if any(w.n_channels != n_channels for w in train_windows):
        raise ShapeMismatchError("training windows have different channel counts")
    stacked = np.concatenate([w.data for w in train_windows], axis=1)
    return fit_normalization_array(stacked)


def fit_normalization_array(data: np.ndarray) -> NormalizationStats:
    """Fit statistics on a ``[n_channels, n_samples]`` array."""
    mean = data.mean(axis=1)
    std = data.std(axis=1)
    flagged = [int(c) for c in np.flatnonzero(std == 0.0)]
    if flagged:
        logger.warning(
            f"Zero-variance channels {flagged} normalized with std=1",
        )
        std = np.where(std == 0.0, 1.0, std)
    return NormalizationStats(mean=mean.tolist(), std=std.tolist(), flagged=flagged)


def _check_channels(n_channels: int, stats: NormalizationStats) -> None:
    if n_channels != len(stats.mean):
        raise ShapeMismatchError(
            f"window has {n_channels} channels, statistics have {len(stats.mean)}"
        )


def normalize_array(data: np.ndarray, stats: NormalizationStats) -> np.ndarray:
    """Normalize ``[..., n_channels, n_w]`` data with ``stats``."""
    _check_channels(data.shape[-2], stats)
    mean = np.asarray(stats.mean)[:, None]
    std = np.asarray(stats.std)[:, None]
    return (data - mean) / std


def apply_normalization(w: Window, stats: NormalizationStats) -> Window:
    """Return ``w`` with ``(x - mean) / std`` per channel; labels are kept.

    Raises:
        ShapeMismatchError: If the channel counts differ
    """
    return w.model_copy(update={"data": normalize_array(w.data, stats)})


def invert_normalization(w: Window, stats: NormalizationStats) -> Window:
    """Undo :func:`apply_normalization`."""
    _check_channels(w.n_channels, stats)
    mean = np.asarray(stats.mean)[:, None]
    std = np.asarray(stats.std)[:, None]
    return w.model_copy(update={"data": w.data * std + mean})
