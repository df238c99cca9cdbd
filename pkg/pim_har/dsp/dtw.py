"""Dynamic time warping with an optional Sakoe-Chiba band."""

from typing import List, Optional, Tuple

import numpy as np

from pim_har.errors import BandTooNarrowError, EmptyInputError
from pim_har.models.signal import DtwResult


def _accumulated_cost(
    x1: np.ndarray, x2: np.ndarray, band: Optional[int]
) -> np.ndarray:
    n, m = x1.size, x2.size
    cost = np.abs(x1[:, None] - x2[None, :])
    if band is not None:
        i, j = np.indices((n, m))
        cost = np.where(np.abs(i - j) <= band, cost, np.inf)

    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    # Sweep anti-diagonals: every cell on diagonal s depends only on s-1 and s-2.
    for s in range(n + m - 1):
        i = np.arange(max(0, s - m + 1), min(n - 1, s) + 1)
        j = s - i
        acc[i + 1, j + 1] = cost[i, j] + np.minimum(
            np.minimum(acc[i, j + 1], acc[i + 1, j]), acc[i, j]
        )
    return acc


def _traceback(acc: np.ndarray) -> List[Tuple[int, int]]:
    i, j = acc.shape[0] - 1, acc.shape[1] - 1
    path = [(i - 1, j - 1)]
    while (i, j) != (1, 1):
        candidates = [
            (acc[i - 1, j - 1], i - 1, j - 1),
            (acc[i - 1, j], i - 1, j),
            (acc[i, j - 1], i, j - 1),
        ]
        _, i, j = min(candidates, key=lambda c: c[0])
        path.append((i - 1, j - 1))
    path.reverse()
    return path


def dtw_distance(
    x1: np.ndarray,
    x2: np.ndarray,
    band: Optional[int] = None,
    return_path: bool = False,
) -> DtwResult:
    """Boundary-to-boundary DTW with local cost ``|x1[i] - x2[j]|``.

    Moves are (i-1, j), (i, j-1) and (i-1, j-1) without step weights; the
    distance is the accumulated cost at the terminal cell, not normalized.

    Args:
        x1: First sequence
        x2: Second sequence
        band: Sakoe-Chiba half width in samples, or None for no constraint
        return_path: Also trace back the optimal warping path

    Returns:
        The DTW result

    Raises:
        EmptyInputError: If either sequence is empty
        BandTooNarrowError: If the band cannot reach the terminal cell
    """
    x1 = np.asarray(x1, dtype=np.float64).ravel()
    x2 = np.asarray(x2, dtype=np.float64).ravel()
    if x1.size == 0 or x2.size == 0:
        raise EmptyInputError("DTW needs two non-empty sequences")
    if band is not None and band < abs(x1.size - x2.size):
        raise BandTooNarrowError(
            f"band {band} is narrower than the length difference "
            f"{abs(x1.size - x2.size)}"
        )

    acc = _accumulated_cost(x1, x2, band)
    path = _traceback(acc) if return_path else None
    return DtwResult(distance=float(acc[-1, -1]), path=path)
