from typing import List

import numpy as np
import pytest

from pim_har.models.labels import PseudoLabelSet
from pim_har.models.network import EncoderSpec
from pim_har.models.series import Window

POSITIONS = ("left_arm", "right_arm")


@pytest.fixture
def small_encoder() -> EncoderSpec:
    """A three-layer encoder accepting windows of 15 samples or more."""
    return EncoderSpec(conv_channels=(4, 6, 8), kernel_sizes=(9, 5, 3), dropout=0.0)


def pseudo_windows(n: int, seed: int = 0, length: int = 24) -> List[Window]:
    """Random six-channel windows with pseudo-labels and two activity classes."""
    rng = np.random.default_rng(seed)
    windows = []
    for i in range(n):
        pseudo = PseudoLabelSet(
            speed_bins={p: int(rng.integers(0, 11)) for p in POSITIONS},
            angle_bins={
                p: (
                    int(rng.integers(0, 11)),
                    int(rng.integers(0, 11)),
                    int(rng.integers(0, 11)),
                )
                for p in POSITIONS
            },
            symmetry_bins={"arms": int(rng.integers(0, 11))},
        )
        windows.append(
            Window(
                data=rng.normal(size=(6, length)),
                label=i % 2,
                pseudo=pseudo,
                subject_id=str(i % 3),
                window_index=i,
            )
        )
    return windows


def separable_windows(n_per_class: int, seed: int = 0) -> List[Window]:
    """Two classes told apart by the sign of a constant offset on channel 0."""
    rng = np.random.default_rng(seed)
    windows = []
    for label, offset in ((0, 2.0), (1, -2.0)):
        for i in range(n_per_class):
            data = 0.1 * rng.normal(size=(6, 24))
            data[0] += offset
            windows.append(
                Window(data=data, label=label, subject_id="1", window_index=i)
            )
    return windows
