"""Butterworth design and zero-phase filtering."""

from typing import Union

import numpy as np
from scipy import signal

from pim_har.errors import InvalidCutoffError, SeriesTooShortForFilterError
from pim_har.logger import dsp_logger as logger
from pim_har.models.constants import FILTER_CUTOFF_HZ, FILTER_ORDER
from pim_har.models.signal import FilterKind, IirFilter


def design_butterworth(
    order: int,
    cutoff_hz: float,
    sample_rate_hz: float,
    kind: Union[FilterKind, str] = FilterKind.LOWPASS,
) -> IirFilter:
    """Design a digital Butterworth filter with the bilinear transform.

    Args:
        order: Filter order, at least 1
        cutoff_hz: -3 dB frequency in Hz
        sample_rate_hz: Sampling frequency in Hz
        kind: ``lowpass`` or ``highpass``

    Returns:
        The filter with ``a[0] == 1``

    Raises:
        InvalidCutoffError: If the cutoff is not inside (0, Nyquist)
        ValueError: If the order is below 1
    """
    if order < 1:
        raise ValueError(f"filter order must be >= 1, got {order}")
    nyquist = sample_rate_hz / 2.0
    if not 0.0 < cutoff_hz < nyquist:
        raise InvalidCutoffError(
            f"cutoff {cutoff_hz} Hz must lie in (0, {nyquist}) Hz "
            f"for fs={sample_rate_hz}"
        )
    kind = FilterKind(kind)
    b, a = signal.butter(order, cutoff_hz, btype=kind.value, fs=sample_rate_hz)
    b, a = b / a[0], a / a[0]
    return IirFilter(
        b=b.tolist(),
        a=a.tolist(),
        order=order,
        cutoff_hz=cutoff_hz,
        sample_rate_hz=sample_rate_hz,
        kind=kind,
    )


def gain_at(f: IirFilter, freq_hz: float) -> float:
    """Single-pass magnitude response |H(e^{jω})| at ``freq_hz``."""
    _, h = signal.freqz(f.b, f.a, worN=[freq_hz], fs=f.sample_rate_hz)
    return float(np.abs(h[0]))


def filtfilt(f: IirFilter, x: np.ndarray) -> np.ndarray:
    """Apply ``f`` forward and backward along the last axis.

    Edges are extended by odd reflection of ``3 * (order + 1)`` samples so the
    output keeps the input length and has no phase shift.

    Raises:
        SeriesTooShortForFilterError: If the series is not longer than the padding
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] <= f.padlen:
        raise SeriesTooShortForFilterError(
            f"series of length {x.shape[-1]} is too short for zero-phase filtering "
            f"(needs more than {f.padlen} samples)"
        )
    return signal.filtfilt(f.b, f.a, x, axis=-1, padtype="odd", padlen=f.padlen)


def lowpass(
    x: np.ndarray,
    sample_rate_hz: float,
    cutoff_hz: float = FILTER_CUTOFF_HZ,
    order: int = FILTER_ORDER,
) -> np.ndarray:
    """Zero-phase Butterworth lowpass of every row of ``x``."""
    f = design_butterworth(order, cutoff_hz, sample_rate_hz, FilterKind.LOWPASS)
    logger.debug(
        "Applying zero-phase lowpass",
        extra={"cutoff_hz": cutoff_hz, "order": order},
    )
    return filtfilt(f, x)
