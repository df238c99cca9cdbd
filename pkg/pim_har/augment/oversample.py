"""Balanced pre-training set: one variant per augmentation, originals oversampled."""

from typing import List, Optional, Sequence

import numpy as np

from pim_har.errors import EmptyInputError
from pim_har.logger import train_logger as logger
from pim_har.models.config import AugmentationConfig
from pim_har.models.constants import AUGMENTATIONS, STREAM_AUGMENT
from pim_har.models.series import Window

from .transforms import horizontal_flip, permute_segments, time_warp


def augment_window(
    w: Window, index: int, seed: int, cfg: AugmentationConfig
) -> List[Window]:
    """The permuted, time-warped and flipped variants of one window.

    Random draws come from ``(seed, index)``, so a window's variants do not
    depend on the order in which windows are processed.
    """
    permute_seed, warp_seed = np.random.SeedSequence(
        [seed, STREAM_AUGMENT, index]
    ).spawn(2)
    return [
        permute_segments(w, cfg.permute_segments, permute_seed),
        time_warp(w, cfg.warp_knots, cfg.warp_sigma, warp_seed),
        horizontal_flip(w),
    ]


def build_pretrain_set(
    windows: Sequence[Window], seed: int, cfg: Optional[AugmentationConfig] = None
) -> List[Window]:
    """Augment every window three ways and replicate the originals three times.

    ``N`` windows become ``6N``, half of them augmented, shuffled with ``seed``.
    Pseudo-labels are copied from the source window.

    Raises:
        EmptyInputError: If no windows are given
    """
    if not windows:
        raise EmptyInputError("no windows to augment")
    cfg = cfg or AugmentationConfig()
    replicas = len(AUGMENTATIONS)
    result: List[Window] = []
    for i, w in enumerate(windows):
        result.extend(augment_window(w, i, seed, cfg))
        result.extend([w] * replicas)
    order = np.random.default_rng([seed, STREAM_AUGMENT]).permutation(len(result))
    logger.debug(f"Pre-training set: {len(windows)} windows -> {len(result)}")
    return [result[i] for i in order]
