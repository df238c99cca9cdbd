"""Tests for roll/pitch/yaw estimation and the angle feature."""

import math

import numpy as np
import pytest

from pim_har.errors import DegenerateGravityError, ShapeMismatchError
from pim_har.models.constants import STANDARD_GRAVITY
from pim_har.pseudo_labels.ahrs import Madgwick, quat_conjugate, quat_multiply
from pim_har.pseudo_labels.angles import (
    angle_feature,
    angles_from_ahrs,
    angles_from_gravity,
)
from pim_har.pseudo_labels.motion import gravity_estimate


def test_upright_gravity_gives_zero_angles() -> None:
    """Test that gravity along z gives zero roll, pitch and yaw."""
    g = np.tile([[0.0], [0.0], [9.81]], (1, 5))
    np.testing.assert_allclose(angles_from_gravity(g), 0.0)


def test_gravity_along_y() -> None:
    """Test roll and yaw for gravity along the y axis."""
    g = np.tile([[0.0], [9.81], [0.0]], (1, 3))
    roll, pitch, yaw = angles_from_gravity(g)[:, 0]
    assert roll == pytest.approx(math.pi / 2)
    assert pitch == 0.0
    assert yaw == pytest.approx(math.pi / 2)


def test_angles_are_half_open() -> None:
    """Test that -pi maps to +pi."""
    g = np.tile([[-1.0], [-0.0], [-1.0]], (1, 2))
    angles = angles_from_gravity(g)
    assert np.all(angles > -math.pi)
    assert np.all(angles <= math.pi)


def test_degenerate_gravity() -> None:
    """Test that a vanishing gravity vector is rejected."""
    g = np.ones((3, 4))
    g[:, 2] = 0.0
    with pytest.raises(DegenerateGravityError):
        angles_from_gravity(g)


def test_angle_feature_sign_follows_sum() -> None:
    """Test the sign-weighted mean absolute angle per axis."""
    angles = np.array([[1.0, -0.5, 0.5], [-1.0, -2.0, 0.0], [0.0, 0.0, 0.0]])
    feature = angle_feature(angles, "hand")
    assert feature.delta_r[0] == pytest.approx(2.0 / 3.0)
    assert feature.delta_r[1] == pytest.approx(-1.0)
    # sign(0) counts as positive
    assert feature.delta_r[2] == 0.0
    assert feature.sensor_position == "hand"


def test_angle_feature_rejects_empty() -> None:
    """Test that the window must contain samples."""
    with pytest.raises(ShapeMismatchError):
        angle_feature(np.zeros((3, 0)))


def test_quaternion_helpers() -> None:
    """Test that a unit quaternion times its conjugate is the identity."""
    q = np.array([0.5, 0.5, 0.5, 0.5])
    np.testing.assert_allclose(
        quat_multiply(q, quat_conjugate(q)), [1.0, 0.0, 0.0, 0.0]
    )


def test_madgwick_rejects_bad_settings() -> None:
    """Test that period and gain must be positive."""
    with pytest.raises(ValueError):
        Madgwick(sample_period=0.0)


def test_ahrs_at_rest_keeps_identity() -> None:
    """Test that a level sensor at rest reports zero angles."""
    n = 50
    accel = np.tile([[0.0], [0.0], [9.81]], (1, n))
    angles = angles_from_ahrs(accel, np.zeros((3, n)), None, 100.0)
    np.testing.assert_allclose(angles, 0.0, atol=1e-12)


def test_ahrs_converges_to_tilt() -> None:
    """Test that the filter settles on the roll implied by the accelerometer."""
    n = 2000
    accel = np.tile([[0.0], [9.81], [0.0]], (1, n))
    angles = angles_from_ahrs(accel, np.zeros((3, n)), None, 100.0, beta=0.5)
    assert angles[0, -1] == pytest.approx(math.pi / 2, abs=0.05)


def test_ahrs_with_magnetometer_at_rest() -> None:
    """Test that the MARG update keeps a consistent level orientation."""
    n = 50
    accel = np.tile([[0.0], [0.0], [9.81]], (1, n))
    mag = np.tile([[30.0], [0.0], [-20.0]], (1, n))
    angles = angles_from_ahrs(accel, np.zeros((3, n)), mag, 100.0)
    np.testing.assert_allclose(angles[:2], 0.0, atol=1e-6)


def test_ahrs_shape_checks() -> None:
    """Test that misaligned inputs are rejected."""
    with pytest.raises(ShapeMismatchError):
        angles_from_ahrs(np.zeros((3, 5)), np.zeros((3, 4)), None, 50.0)


def test_roll_survives_fast_jitter() -> None:
    """Test that a 10 Hz jitter leaves the lowpassed roll in place."""
    rng = np.random.default_rng(31)
    t = np.arange(200) / 50.0
    for _ in range(20):
        roll = float(rng.uniform(-2.5, 2.5))
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        accel = STANDARD_GRAVITY * np.array([0.0, math.sin(roll), math.cos(roll)])
        accel = accel[:, None] + np.outer(direction, np.sin(2 * np.pi * 10.0 * t))
        angles = angles_from_gravity(gravity_estimate(accel, 50.0))
        assert angle_feature(angles).delta_r[0] == pytest.approx(roll, abs=0.05)
