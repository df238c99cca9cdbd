"""Tests for gravity separation and the speed-of-motion feature."""

import numpy as np
import pytest
from scipy import signal

from pim_har.errors import ShapeMismatchError
from pim_har.models.constants import STANDARD_GRAVITY
from pim_har.pseudo_labels.motion import gravity_estimate, speed_of_motion

FS = 50.0


def _oscillating(amplitude: float, n: int = 200, freq_hz: float = 3.0) -> np.ndarray:
    t = np.arange(n) / FS
    accel = np.zeros((3, n))
    accel[2] = STANDARD_GRAVITY
    accel[0] = amplitude * np.sin(2 * np.pi * freq_hz * t)
    return accel


def test_gravity_of_static_sensor() -> None:
    """Test that a resting sensor is all gravity."""
    gravity = gravity_estimate(_oscillating(0.0), FS)
    np.testing.assert_allclose(gravity[2], STANDARD_GRAVITY, rtol=1e-9)
    np.testing.assert_allclose(gravity[:2], 0.0, atol=1e-9)


def test_static_sensor_does_not_move() -> None:
    """Test that constant acceleration yields zero speed of motion."""
    still = speed_of_motion(_oscillating(0.0), FS)
    assert still.delta_d == pytest.approx(0.0, abs=1e-9)


def test_speed_grows_with_amplitude() -> None:
    """Test that stronger motion gives a larger feature."""
    slow = speed_of_motion(_oscillating(1.0), FS).delta_d
    fast = speed_of_motion(_oscillating(4.0), FS).delta_d
    assert fast > slow > 0.0
    # integration and filtering are linear in the linear acceleration
    assert fast == pytest.approx(4.0 * slow, rel=1e-6)


def test_feature_is_orientation_independent() -> None:
    """Test that rotating the sensor frame leaves the feature unchanged."""
    accel = _oscillating(2.0)
    angle = 0.7
    rotation = np.array(
        [
            [np.cos(angle), 0.0, np.sin(angle)],
            [0.0, 1.0, 0.0],
            [-np.sin(angle), 0.0, np.cos(angle)],
        ]
    )
    original = speed_of_motion(accel, FS).delta_d
    rotated = speed_of_motion(rotation @ accel, FS).delta_d
    assert rotated == pytest.approx(original, rel=1e-9)


def test_sensor_position_is_recorded() -> None:
    """Test that the feature names its sensor."""
    assert speed_of_motion(_oscillating(1.0), FS, "hand").sensor_position == "hand"


def test_rejects_non_triaxial_input() -> None:
    """Test that the window must have three rows."""
    with pytest.raises(ShapeMismatchError):
        speed_of_motion(np.zeros((2, 100)), FS)


def _speed_by_hand(accel: np.ndarray) -> float:
    b, a = signal.butter(4, 2.0, fs=FS)
    pad = 3 * len(a)
    gravity = signal.filtfilt(b, a, accel, axis=-1, padtype="odd", padlen=pad)
    linear = accel - gravity
    dt = 1.0 / FS
    n = accel.shape[1]
    velocity = np.zeros_like(linear)
    position = np.zeros_like(linear)
    for k in range(1, n):
        velocity[:, k] = velocity[:, k - 1] + linear[:, k] * dt
        position[:, k] = position[:, k - 1] + velocity[:, k - 1] * dt
    position = signal.filtfilt(b, a, position, axis=-1, padtype="odd", padlen=pad)
    total = 0.0
    for k in range(1, n):
        total += float(np.sum((position[:, k] - position[:, k - 1]) ** 2))
    return float(np.sqrt(total))


def test_matches_step_by_step_computation() -> None:
    """Test the vectorized feature against an explicit sample-by-sample loop."""
    rng = np.random.default_rng(21)
    for _ in range(50):
        accel = rng.normal(0.0, 2.0, size=(3, 100))
        accel[2] += STANDARD_GRAVITY
        expected = _speed_by_hand(accel)
        assert speed_of_motion(accel, FS).delta_d == pytest.approx(
            expected, rel=1e-9, abs=1e-9
        )


def test_random_rotations_keep_the_feature() -> None:
    """Test orientation independence for arbitrary sensor rotations."""
    rng = np.random.default_rng(22)
    for _ in range(20):
        accel = rng.normal(0.0, 1.0, size=(3, 150)) + _oscillating(2.0, n=150)
        q, r = np.linalg.qr(rng.standard_normal((3, 3)))
        rotation = q * np.sign(np.diag(r))
        if np.linalg.det(rotation) < 0:
            rotation[:, 0] = -rotation[:, 0]
        original = speed_of_motion(accel, FS).delta_d
        rotated = speed_of_motion(rotation @ accel, FS).delta_d
        assert rotated == pytest.approx(original, rel=0.01)
