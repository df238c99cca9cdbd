from typing import Callable, List, Optional

import numpy as np
import pytest

from pim_har.models.config import ExperimentConfig
from pim_har.models.series import Axis, ChannelSpec, Modality, MultiChannelSeries

SeriesFactory = Callable[..., MultiChannelSeries]


def accel_layout(positions: List[str], with_gyro: bool = False) -> List[ChannelSpec]:
    modalities = [Modality.ACCEL] + ([Modality.GYRO] if with_gyro else [])
    return [
        ChannelSpec(sensor_position=p, modality=m, axis=a)
        for p in positions
        for m in modalities
        for a in Axis
    ]


@pytest.fixture
def make_series() -> SeriesFactory:
    """Factory for random series over accelerometer positions."""

    def factory(
        n_samples: int = 200,
        positions: Optional[List[str]] = None,
        subject_id: str = "1",
        session_id: str = "walk",
        labels: Optional[np.ndarray] = None,
        sample_rate_hz: float = 50.0,
        seed: int = 0,
    ) -> MultiChannelSeries:
        layout = accel_layout(positions or ["left_arm", "right_arm"])
        rng = np.random.default_rng(seed)
        return MultiChannelSeries(
            data=rng.normal(0.0, 1.0, size=(len(layout), n_samples)),
            sample_rate_hz=sample_rate_hz,
            layout=layout,
            subject_id=subject_id,
            session_id=session_id,
            labels=labels,
        )

    return factory


@pytest.fixture
def tiny_config() -> ExperimentConfig:
    """Synthetic experiment small enough to train in seconds."""
    return ExperimentConfig.from_dict(
        {
            "preset": "synthetic",
            "name": "tiny",
            "dataset": {"pretrain_subjects": [], "downstream_subjects": []},
            "synthetic": {
                "n_subjects": 4,
                "duration_s": 8.0,
                "sessions_per_class": 1,
                "upside_down_probability": 0.0,
            },
            "encoder": {"conv_channels": [4, 6, 8], "kernel_sizes": [9, 5, 3]},
            "augmentation": {"enabled": False},
            "pretrain": {"max_epochs": 2, "batch_size": 32},
            "finetune": {"max_epochs": 3, "batch_size": 16},
            "evaluation": {"n_runs": 1, "budgets": [2], "max_folds": 1},
        }
    )
