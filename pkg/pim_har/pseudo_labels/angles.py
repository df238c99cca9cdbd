"""Roll, pitch and yaw from gravity or from an AHRS, and the ΔR angle feature."""

from typing import Optional

import numpy as np

from pim_har.errors import DegenerateGravityError, ShapeMismatchError
from pim_har.models.constants import MADGWICK_BETA, MIN_GRAVITY_NORM
from pim_har.models.labels import AngleFeature

from .ahrs import Madgwick


def _half_open(angles: np.ndarray) -> np.ndarray:
    # arctan2 may return exactly -pi; the convention is (-pi, pi]
    return np.where(angles == -np.pi, np.pi, angles)


def _angles_from_direction(
    gx: np.ndarray, gy: np.ndarray, gz: np.ndarray
) -> np.ndarray:
    roll = np.arctan2(gy, gz)
    pitch = np.arctan2(gx, gz)
    yaw = np.arctan2(gy, gx)
    return _half_open(np.stack([roll, pitch, yaw]))


def angles_from_gravity(gravity_window: np.ndarray) -> np.ndarray:
    """Per-timestep φ = atan2(g_y, g_z), θ = atan2(g_x, g_z), ψ = atan2(g_y, g_x).

    ``atan2(0, 0)`` is 0, so ψ is 0 for gravity along the z axis.

    Returns:
        3×n_w array of (φ, θ, ψ) in (-π, π]

    Raises:
        ShapeMismatchError: If the input is not 3×n_w
        DegenerateGravityError: If ‖g‖ < 1e-6 at any timestep
    """
    g = np.asarray(gravity_window, dtype=np.float64)
    if g.ndim != 2 or g.shape[0] != 3:
        raise ShapeMismatchError(f"gravity must be a 3×n_w array, got {g.shape}")
    norms = np.linalg.norm(g, axis=0)
    if np.any(norms < MIN_GRAVITY_NORM):
        first = int(np.argmax(norms < MIN_GRAVITY_NORM))
        raise DegenerateGravityError(f"gravity vector vanishes at timestep {first}")
    return _angles_from_direction(g[0], g[1], g[2])


def angles_from_ahrs(
    accel: np.ndarray,
    gyro: np.ndarray,
    mag: Optional[np.ndarray],
    sample_rate_hz: float,
    beta: float = MADGWICK_BETA,
) -> np.ndarray:
    """Angles from a Madgwick orientation estimate, one update per sample.

    Roll and pitch use the :func:`angles_from_gravity` formulas on the gravity
    direction implied by each quaternion; yaw is the quaternion heading. The
    filter starts from the identity orientation in every window.

    Raises:
        ShapeMismatchError: If the inputs are not aligned 3×n_w arrays
    """
    accel = np.asarray(accel, dtype=np.float64)
    gyro = np.asarray(gyro, dtype=np.float64)
    if accel.ndim != 2 or accel.shape[0] != 3 or gyro.shape != accel.shape:
        raise ShapeMismatchError(
            f"accel {accel.shape} and gyro {gyro.shape} must be equal 3×n_w arrays"
        )
    if mag is not None:
        mag = np.asarray(mag, dtype=np.float64)
        if mag.shape != accel.shape:
            raise ShapeMismatchError(f"mag {mag.shape} must match accel {accel.shape}")

    ahrs = Madgwick(sample_period=1.0 / sample_rate_hz, beta=beta)
    quaternions = np.empty((accel.shape[1], 4))
    for k in range(accel.shape[1]):
        if mag is None:
            ahrs.update_imu(gyro[:, k], accel[:, k])
        else:
            ahrs.update_marg(gyro[:, k], accel[:, k], mag[:, k])
        quaternions[k] = ahrs.q

    w, x, y, z = quaternions.T
    angles = _angles_from_direction(
        2 * (x * z - w * y), 2 * (w * x + y * z), 1 - 2 * (x * x + y * y)
    )
    angles[2] = _half_open(np.arctan2(2 * (w * z + x * y), 1 - 2 * (y * y + z * z)))
    return angles


def angle_feature(angles: np.ndarray, sensor_position: str = "") -> AngleFeature:
    """ΔR = mean(|angle|) · sign(Σ angle) per axis, with sign(0) = +1.

    Raises:
        ShapeMismatchError: If the input is not a non-empty 3×n_w array
    """
    angles = np.asarray(angles, dtype=np.float64)
    if angles.ndim != 2 or angles.shape[0] != 3 or angles.shape[1] == 0:
        raise ShapeMismatchError(
            f"angles must be a non-empty 3×n_w array, got {angles.shape}"
        )
    sign = np.where(angles.sum(axis=1) >= 0, 1.0, -1.0)
    delta_r = np.abs(angles).mean(axis=1) * sign
    delta_r = np.clip(delta_r, -np.pi, np.pi)
    return AngleFeature(
        sensor_position=sensor_position,
        delta_r=(float(delta_r[0]), float(delta_r[1]), float(delta_r[2])),
    )
