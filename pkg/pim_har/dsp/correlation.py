"""Full cross-correlation and shift alignment of two sequences.

Both functions share one lag convention: the correlation value at lag ``ℓ`` is
``Σ_k x1[k+ℓ]·x2[k]``, and ``align_by_shift(x1, x2, ℓ)`` pairs exactly those
samples. A positive lag therefore means ``x1`` runs behind ``x2``.
"""

from typing import Tuple

import numpy as np
from scipy import signal

from pim_har.errors import EmptyInputError, NoOverlapError


def cross_correlate_full(
    x1: np.ndarray, x2: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Linear cross-correlation over every lag with at least one overlapping pair.

    Returns:
        ``(lags, values)`` with lags ``-(len(x2)-1) .. len(x1)-1``

    Raises:
        EmptyInputError: If either sequence is empty
    """
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.size == 0 or x2.size == 0:
        raise EmptyInputError("cross-correlation needs two non-empty sequences")
    values = np.correlate(x1, x2, mode="full")
    lags = signal.correlation_lags(x1.size, x2.size, mode="full")
    return lags, values


def best_shift(x1: np.ndarray, x2: np.ndarray) -> int:
    """Lag of maximum cross-correlation (first maximum on ties)."""
    lags, values = cross_correlate_full(x1, x2)
    return int(lags[int(np.argmax(values))])


def align_by_shift(
    x1: np.ndarray, x2: np.ndarray, shift: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Truncate both sequences to the samples that overlap at lag ``shift``.

    Raises:
        NoOverlapError: If ``|shift|`` is not below both sequence lengths
    """
    x1 = np.asarray(x1)
    x2 = np.asarray(x2)
    if abs(shift) >= min(x1.size, x2.size):
        raise NoOverlapError(
            f"shift {shift} leaves no overlap between sequences of length "
            f"{x1.size} and {x2.size}"
        )
    start = max(0, -shift)
    stop = min(x2.size, x1.size - shift)
    return x1[start + shift : stop + shift], x2[start:stop]
