"""Head layout derived from the sensor configuration, and head targets."""

from typing import Collection, List, Sequence

import numpy as np

from pim_har.errors import NoPseudoLabelsError, NoSensorsError
from pim_har.logger import train_logger as logger
from pim_har.models.config import ALL_TASKS, LimbPair, SamTask
from pim_har.models.constants import HEAD_HIDDEN, N_BINS
from pim_har.models.network import HeadSpec, HeadTask
from pim_har.models.series import Window

CLASSIFIER = "classifier"
ANGLE_OUTPUTS = 3 * N_BINS

# Loss family of every SAM head task
FAMILY = {
    HeadTask.ANGLE: SamTask.ANGLE,
    HeadTask.SPEED: SamTask.MOTION,
    HeadTask.SYMMETRY: SamTask.SYMMETRY,
}


def build_heads(
    positions: Sequence[str],
    pairs: Sequence[LimbPair],
    tasks: Collection[SamTask] = ALL_TASKS,
) -> List[HeadSpec]:
    """One angle and one speed head per sensor, one symmetry head per limb pair.

    Angle heads emit 33 sigmoid outputs (three 11-way blocks for x, y, z); speed
    and symmetry heads emit 11 logits for softmax cross-entropy.

    Raises:
        NoSensorsError: If there is no accelerometer position
    """
    if not positions:
        raise NoSensorsError("the layout exposes no accelerometer sensor")
    heads: List[HeadSpec] = []
    if SamTask.ANGLE in tasks:
        heads.extend(
            HeadSpec(
                name=f"angle:{p}",
                task=HeadTask.ANGLE,
                source=p,
                hidden=HEAD_HIDDEN,
                output_dim=ANGLE_OUTPUTS,
                output_nonlinearity="sigmoid",
            )
            for p in positions
        )
    if SamTask.MOTION in tasks:
        heads.extend(
            HeadSpec(
                name=f"speed:{p}",
                task=HeadTask.SPEED,
                source=p,
                hidden=HEAD_HIDDEN,
                output_dim=N_BINS,
            )
            for p in positions
        )
    if SamTask.SYMMETRY in tasks:
        if not pairs:
            logger.info("No limb pair available; building no symmetry head (d = 0)")
        heads.extend(
            HeadSpec(
                name=f"symmetry:{pair.name}",
                task=HeadTask.SYMMETRY,
                source=pair.name,
                hidden=HEAD_HIDDEN,
                output_dim=N_BINS,
            )
            for pair in pairs
        )
    return heads


def classifier_head(n_classes: int) -> HeadSpec:
    """The single linear layer mapping the embedding to activity logits."""
    return HeadSpec(name=CLASSIFIER, task=HeadTask.CLASSIFIER, output_dim=n_classes)


def head_targets(head: HeadSpec, windows: Sequence[Window]) -> np.ndarray:
    """Training targets of ``head``: multi-hot rows for angles, class ids otherwise.

    Raises:
        NoPseudoLabelsError: If a window has no pseudo-labels for this head
    """
    assert head.source is not None
    if head.task == HeadTask.ANGLE:
        targets = np.zeros((len(windows), ANGLE_OUTPUTS))
    else:
        targets = np.zeros(len(windows), dtype=np.int64)
    for i, w in enumerate(windows):
        pseudo = w.pseudo
        if pseudo is None:
            raise NoPseudoLabelsError(
                f"window {i} of {w.subject_id} has no pseudo-labels"
            )
        try:
            if head.task == HeadTask.ANGLE:
                for axis, bin_id in enumerate(pseudo.angle_bins[head.source]):
                    targets[i, axis * N_BINS + bin_id] = 1.0
            elif head.task == HeadTask.SPEED:
                targets[i] = pseudo.speed_bins[head.source]
            else:
                targets[i] = pseudo.symmetry_bins[head.source]
        except KeyError as e:
            raise NoPseudoLabelsError(
                f"window {i} of {w.subject_id} lacks a {head.name} pseudo-label"
            ) from e
    return targets
