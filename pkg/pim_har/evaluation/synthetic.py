"""Synthetic IMU corpus whose activity classes differ along the SAM families.

Every class is a limb motion: a static tilt of the sensor against gravity
plus an oscillation at a class frequency and amplitude, with a class phase
offset between the left and right limb. Tilt separates classes by angle,
amplitude by speed of motion, and the inter-limb phase by symmetry. Sensors
worn upside down keep speed and symmetry but scramble the raw channel signs.
"""

from typing import List

import numpy as np

from pim_har.logger import eval_logger as logger
from pim_har.models.config import ClassMotion, SyntheticSpec
from pim_har.models.constants import STANDARD_GRAVITY, STREAM_SYNTHETIC
from pim_har.models.series import (
    DEFAULT_UNITS,
    Axis,
    ChannelSpec,
    Modality,
    MultiChannelSeries,
)

# Share of the oscillation along the sensor x axis; the rest follows gravity
LATERAL_SHARE = 0.2
# Tilt wobble (rad) per unit of acceleration amplitude, seen by the gyroscope
WOBBLE_PER_AMPLITUDE = 0.02


def synthetic_layout(spec: SyntheticSpec) -> List[ChannelSpec]:
    """Accelerometer (and optionally gyroscope) triples for every position."""
    modalities = [Modality.ACCEL] + ([Modality.GYRO] if spec.with_gyro else [])
    return [
        ChannelSpec(
            sensor_position=position,
            modality=modality,
            axis=axis,
            units=DEFAULT_UNITS[modality],
        )
        for position in spec.positions
        for modality in modalities
        for axis in Axis
    ]


def _limb_signal(
    motion: ClassMotion,
    t: np.ndarray,
    amplitude: float,
    phase: float,
    freq_scale: float,
    tilt_offset: float,
    with_gyro: bool,
    rng: np.random.Generator,
    noise_sigma: float,
) -> np.ndarray:
    omega = 2.0 * np.pi * motion.freq_hz * freq_scale
    oscillation = amplitude * np.sin(omega * t + phase)
    wobble = WOBBLE_PER_AMPLITUDE * oscillation
    tilt = motion.tilt_rad + tilt_offset + wobble

    gravity = STANDARD_GRAVITY * np.stack(
        [np.zeros_like(t), np.sin(tilt), np.cos(tilt)]
    )
    along = np.stack([np.zeros_like(t), np.sin(tilt), np.cos(tilt)])
    lateral = np.stack([np.ones_like(t), np.zeros_like(t), np.zeros_like(t)])
    swing = (1.0 - LATERAL_SHARE) * along + LATERAL_SHARE * lateral
    accel = gravity + oscillation * swing
    channels = [accel]
    if with_gyro:
        tilt_rate = WOBBLE_PER_AMPLITUDE * amplitude * omega * np.cos(omega * t + phase)
        channels.append(np.stack([tilt_rate, np.zeros_like(t), np.zeros_like(t)]))
    signal = np.concatenate(channels, axis=0)
    return signal + rng.normal(0.0, noise_sigma, size=signal.shape)


def _upside_down(signal: np.ndarray, n_triples: int) -> np.ndarray:
    """Turn every sensor triple half a revolution about its x axis."""
    flip = np.tile(np.array([1.0, -1.0, -1.0]), n_triples)
    return signal * flip[:, None]


def generate_synthetic(spec: SyntheticSpec, seed: int = 0) -> List[MultiChannelSeries]:
    """Labeled sessions for every (subject, class), deterministic in ``seed``.

    Subjects differ by a random scaling of amplitude and frequency and a small
    tilt offset of size ``subject_variation``. Even-indexed positions act as
    left limbs and odd-indexed ones as right limbs; right limbs lag by the
    class phase. Each of the ``sessions_per_class`` sessions re-attaches the
    sensors, every limb upside down with ``upside_down_probability``.

    Args:
        spec: Corpus description
        seed: Seed of all random draws

    Returns:
        Series with per-sample labels equal to the class index
    """
    layout = synthetic_layout(spec)
    triples_per_limb = 2 if spec.with_gyro else 1
    n_samples = int(round(spec.duration_s * spec.sample_rate_hz))
    t = np.arange(n_samples) / spec.sample_rate_hz
    series: List[MultiChannelSeries] = []
    for s in range(spec.n_subjects):
        rng = np.random.default_rng([seed, STREAM_SYNTHETIC, s])
        variation = spec.subject_variation
        amp_scale = max(0.2, 1.0 + variation * rng.standard_normal())
        freq_scale = max(0.5, 1.0 + 0.5 * variation * rng.standard_normal())
        tilt_offset = 0.2 * variation * rng.standard_normal()
        for label, motion in enumerate(spec.classes):
            for k in range(spec.sessions_per_class):
                limbs = []
                for i, _ in enumerate(spec.positions):
                    right = i % 2 == 1
                    amplitude = (
                        motion.amplitude_right if right else motion.amplitude_left
                    )
                    limb = _limb_signal(
                        motion,
                        t,
                        amplitude * amp_scale,
                        motion.phase_rad if right else 0.0,
                        freq_scale,
                        tilt_offset,
                        spec.with_gyro,
                        rng,
                        spec.noise_sigma,
                    )
                    if (
                        spec.upside_down_probability > 0
                        and rng.random() < spec.upside_down_probability
                    ):
                        limb = _upside_down(limb, triples_per_limb)
                    limbs.append(limb)
                session_id = (
                    motion.name
                    if spec.sessions_per_class == 1
                    else f"{motion.name}-{k + 1}"
                )
                series.append(
                    MultiChannelSeries(
                        data=np.concatenate(limbs, axis=0),
                        sample_rate_hz=spec.sample_rate_hz,
                        layout=layout,
                        subject_id=f"s{s + 1:02d}",
                        session_id=session_id,
                        labels=np.full(n_samples, label, dtype=np.int64),
                    )
                )
    logger.info(
        f"Generated {len(series)} synthetic sessions for {spec.n_subjects} subjects"
    )
    return series
