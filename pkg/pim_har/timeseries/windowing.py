"""Gap filling and sliding-window segmentation."""

from typing import List, Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from pim_har.errors import AllNaNChannelError, SeriesTooShortError
from pim_har.models.series import MultiChannelSeries, Window

NO_LABEL = -1


def interpolate_nan(series: MultiChannelSeries) -> MultiChannelSeries:
    """Fill NaN gaps by linear interpolation between the nearest valid samples.

    Leading and trailing gaps take the nearest valid value.

    Raises:
        AllNaNChannelError: If a channel has fewer than two valid samples
    """
    data = series.data.copy()
    index = np.arange(series.n_samples)
    for c in range(series.n_channels):
        valid = ~np.isnan(data[c])
        if valid.all():
            continue
        if valid.sum() < 2:
            raise AllNaNChannelError(
                f"channel {series.layout[c].name} of subject {series.subject_id} "
                f"has {int(valid.sum())} valid samples, need at least 2"
            )
        data[c] = np.interp(index, index[valid], data[c, valid])
    return series.model_copy(update={"data": data})


def majority_label(labels: np.ndarray) -> Optional[int]:
    """Most frequent non-negative label (smallest id on ties), or None."""
    known = labels[labels >= 0].astype(np.int64)
    if known.size == 0:
        return None
    return int(np.argmax(np.bincount(known)))


def sliding_windows(
    series: MultiChannelSeries, window_len: int, step: int
) -> List[Window]:
    """Cut ``series`` into fixed-length windows starting every ``step`` samples.

    A trailing partial window is dropped. Windows carry the majority activity label
    of their samples when the series has per-sample labels.

    Raises:
        SeriesTooShortError: If the series is shorter than one window
        ValueError: If ``step`` or ``window_len`` is below 1
    """
    if step < 1 or window_len < 1:
        raise ValueError("window_len and step must both be >= 1")
    if series.n_samples < window_len:
        raise SeriesTooShortError(
            f"series of subject {series.subject_id} has {series.n_samples} samples, "
            f"window needs {window_len}"
        )

    views = sliding_window_view(series.data, window_len, axis=1)[:, ::step]
    label_views = (
        sliding_window_view(series.labels, window_len)[::step]
        if series.labels is not None
        else None
    )
    windows = []
    for k in range(views.shape[1]):
        windows.append(
            Window(
                data=np.ascontiguousarray(views[:, k]),
                label=(
                    majority_label(label_views[k]) if label_views is not None else None
                ),
                subject_id=series.subject_id,
                session_id=series.session_id,
                window_index=k,
            )
        )
    return windows
