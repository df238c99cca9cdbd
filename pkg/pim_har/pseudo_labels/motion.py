"""Gravity separation and the orientation-independent speed-of-motion feature."""

import numpy as np

from pim_har.dsp.filters import lowpass
from pim_har.dsp.integrate import cumulative_integrate
from pim_har.errors import ShapeMismatchError
from pim_har.models.constants import FILTER_CUTOFF_HZ, FILTER_ORDER
from pim_har.models.labels import SpeedFeature


def _check_triaxial(x: np.ndarray, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != 3:
        raise ShapeMismatchError(f"{name} must be a 3×n_w array, got shape {x.shape}")
    return x


def gravity_estimate(
    accel_window: np.ndarray,
    sample_rate_hz: float,
    cutoff_hz: float = FILTER_CUTOFF_HZ,
    order: int = FILTER_ORDER,
) -> np.ndarray:
    """Gravity component of raw acceleration: a zero-phase lowpass per axis.

    Raises:
        ShapeMismatchError: If the window is not 3×n_w
        SeriesTooShortForFilterError: If the window is shorter than the padding
    """
    accel = _check_triaxial(accel_window, "accel_window")
    return lowpass(accel, sample_rate_hz, cutoff_hz, order)


def speed_of_motion(
    accel_window: np.ndarray,
    sample_rate_hz: float,
    sensor_position: str = "",
    cutoff_hz: float = FILTER_CUTOFF_HZ,
    order: int = FILTER_ORDER,
) -> SpeedFeature:
    """Speed-of-motion feature ΔD of one accelerometer window.

    Linear acceleration (raw minus gravity) is integrated to velocity, velocity to
    position, positions are de-noised with the same lowpass, and ΔD is the single
    square root of the summed squared position increments over time and axes.
    Integration restarts from zero in every window.
    """
    accel = _check_triaxial(accel_window, "accel_window")
    dt = 1.0 / sample_rate_hz
    linear = accel - gravity_estimate(accel, sample_rate_hz, cutoff_hz, order)
    velocity = cumulative_integrate(linear, dt)
    position = cumulative_integrate(velocity, dt, lagged=True)
    position = lowpass(position, sample_rate_hz, cutoff_hz, order)
    delta_d = float(np.sqrt(np.sum(np.diff(position, axis=1) ** 2)))
    return SpeedFeature(sensor_position=sensor_position, delta_d=delta_d)
