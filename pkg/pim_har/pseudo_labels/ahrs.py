"""Madgwick gradient-descent orientation filter (IMU and MARG updates).

Quaternions are ``(w, x, y, z)`` and describe the earth frame relative to the
sensor frame, so the expected gravity direction in sensor coordinates is
``(2(xz - wy), 2(wx + yz), 1 - 2(x² + y²))``.
"""

import numpy as np

from pim_har.models.constants import MADGWICK_BETA


def quat_multiply(q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Hamilton product of two quaternions."""
    w1, x1, y1, z1 = q
    w2, x2, y2, z2 = r
    return np.array(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ]
    )


def quat_conjugate(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def _unit(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    return v / norm if norm > 0 else v


class Madgwick:
    """Stateful Madgwick filter advanced one sample at a time."""

    def __init__(self, sample_period: float, beta: float = MADGWICK_BETA) -> None:
        """Initialize at the identity orientation.

        Args:
            sample_period: Seconds between updates
            beta: Gain of the gradient-descent correction
        """
        if sample_period <= 0 or beta <= 0:
            raise ValueError("sample_period and beta must be positive")
        self.sample_period = sample_period
        self.beta = beta
        self.q = np.array([1.0, 0.0, 0.0, 0.0])

    def _integrate(self, gyro: np.ndarray, step: np.ndarray) -> None:
        q_dot = 0.5 * quat_multiply(self.q, np.concatenate(([0.0], gyro)))
        q_dot = q_dot - self.beta * _unit(step)
        self.q = _unit(self.q + q_dot * self.sample_period)

    def update_imu(self, gyro: np.ndarray, accel: np.ndarray) -> None:
        """Advance with gyroscope (rad/s) and accelerometer (any unit) samples."""
        if np.linalg.norm(accel) == 0:
            self._integrate(gyro, np.zeros(4))
            return
        a = _unit(accel)
        w, x, y, z = self.q
        f = np.array(
            [
                2 * (x * z - w * y) - a[0],
                2 * (w * x + y * z) - a[1],
                2 * (0.5 - x * x - y * y) - a[2],
            ]
        )
        jacobian = np.array(
            [
                [-2 * y, 2 * z, -2 * w, 2 * x],
                [2 * x, 2 * w, 2 * z, 2 * y],
                [0.0, -4 * x, -4 * y, 0.0],
            ]
        )
        self._integrate(gyro, jacobian.T @ f)

    def update_marg(self, gyro: np.ndarray, accel: np.ndarray, mag: np.ndarray) -> None:
        """Advance with gyroscope, accelerometer and magnetometer samples.

        Falls back to :meth:`update_imu` when the magnetometer reads zero.
        """
        if np.linalg.norm(mag) == 0:
            self.update_imu(gyro, accel)
            return
        if np.linalg.norm(accel) == 0:
            self._integrate(gyro, np.zeros(4))
            return
        a = _unit(accel)
        m = _unit(mag)
        q = self.q
        m_quat = np.concatenate(([0.0], m))
        h = quat_multiply(q, quat_multiply(m_quat, quat_conjugate(q)))
        bx, bz = np.hypot(h[1], h[2]), h[3]
        w, x, y, z = q
        f = np.array(
            [
                2 * (x * z - w * y) - a[0],
                2 * (w * x + y * z) - a[1],
                2 * (0.5 - x * x - y * y) - a[2],
                2 * bx * (0.5 - y * y - z * z) + 2 * bz * (x * z - w * y) - m[0],
                2 * bx * (x * y - w * z) + 2 * bz * (w * x + y * z) - m[1],
                2 * bx * (w * y + x * z) + 2 * bz * (0.5 - x * x - y * y) - m[2],
            ]
        )
        jacobian = np.array(
            [
                [-2 * y, 2 * z, -2 * w, 2 * x],
                [2 * x, 2 * w, 2 * z, 2 * y],
                [0.0, -4 * x, -4 * y, 0.0],
                [
                    -2 * bz * y,
                    2 * bz * z,
                    -4 * bx * y - 2 * bz * w,
                    -4 * bx * z + 2 * bz * x,
                ],
                [
                    -2 * bx * z + 2 * bz * x,
                    2 * bx * y + 2 * bz * w,
                    2 * bx * x + 2 * bz * z,
                    -2 * bx * w + 2 * bz * y,
                ],
                [
                    2 * bx * y,
                    2 * bx * z - 4 * bz * x,
                    2 * bx * w - 4 * bz * y,
                    2 * bx * x,
                ],
            ]
        )
        self._integrate(gyro, jacobian.T @ f)
