"""Fine-tuning of encoder and classifier on labeled windows, and prediction."""

from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from pim_har.errors import EmptyInputError, ShapeMismatchError
from pim_har.logger import train_logger as logger
from pim_har.models.config import TrainConfig
from pim_har.models.network import EncoderSpec
from pim_har.models.series import Window
from pim_har.nn.functional import softmax

from .heads import CLASSIFIER, classifier_head
from .network import PimNetwork
from .trainer import (
    EVAL_BATCH_SIZE,
    ClassifierObjective,
    Trainer,
    TrainResult,
    finish,
    load_trained,
    split_indices,
    stack_windows,
)

Pretrained = Union[Path, str, PimNetwork]


def build_classifier_network(
    n_channels: int,
    n_classes: int,
    cfg: TrainConfig,
    pretrained: Optional[PimNetwork] = None,
    encoder: Optional[EncoderSpec] = None,
) -> PimNetwork:
    """Encoder plus a linear classifier, initialized from ``cfg.seed``.

    With ``pretrained`` the encoder weights are copied from it; the classifier
    comes from the same seeded stream either way, so a baseline and a
    pre-trained model of one seed differ only in their encoder.

    Raises:
        ShapeMismatchError: If the pre-trained encoder expects other channels
    """
    if pretrained is not None:
        if pretrained.n_channels != n_channels:
            raise ShapeMismatchError(
                f"checkpoint encoder takes {pretrained.n_channels} channels, "
                f"data has {n_channels}"
            )
        encoder = pretrained.encoder_spec
    network = PimNetwork(
        n_channels,
        encoder or EncoderSpec(),
        [classifier_head(n_classes)],
        cfg.seed,
        cfg.precision,
    )
    if pretrained is not None:
        network.load_state_dict(pretrained.state_dict("encoder."), prefix="encoder.")
    return network


def finetune(
    checkpoint: Optional[Pretrained],
    labeled_windows: Sequence[Window],
    n_classes: int,
    cfg: TrainConfig,
    encoder: Optional[EncoderSpec] = None,
    few_shot: bool = False,
    checkpoint_path: Optional[Path] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> TrainResult:
    """Train encoder and classifier jointly with cross-entropy on activity labels.

    Without ``checkpoint`` this is the supervised baseline from a seeded random
    initialization. Nothing is frozen. In the few-shot regime every labeled
    window trains and the final epoch is kept; otherwise ``cfg.val_fraction``
    of the windows validate and the best epoch is kept.

    Args:
        checkpoint: Pre-trained checkpoint path or network, or None
        labeled_windows: Normalized windows with activity labels
        n_classes: Size of the classifier output
        cfg: Optimizer and loop settings
        encoder: Encoder architecture when training from scratch
        few_shot: Train on everything without a validation split
        checkpoint_path: Where to write the fine-tuned model
        metadata: Extra checkpoint metadata

    Raises:
        EmptyInputError: If no window carries a label
        ShapeMismatchError: If labels exceed ``n_classes`` or shapes disagree
    """
    labeled = [w for w in labeled_windows if w.label is not None and w.label >= 0]
    if not labeled:
        raise EmptyInputError("no labeled window to fine-tune on")
    labels = np.array([w.label for w in labeled], dtype=np.int64)
    if labels.max() >= n_classes:
        raise ShapeMismatchError(
            f"label {labels.max()} does not fit a {n_classes}-class classifier"
        )
    x = stack_windows(labeled)

    pretrained: Optional[PimNetwork] = None
    if isinstance(checkpoint, PimNetwork):
        pretrained = checkpoint
    elif checkpoint is not None:
        pretrained, _ = load_trained(Path(checkpoint))
    network = build_classifier_network(x.shape[1], n_classes, cfg, pretrained, encoder)
    network.check_input(x[:1])

    if few_shot or cfg.val_fraction == 0:
        train_idx, val_idx = np.arange(len(labeled)), np.array([], dtype=np.int64)
    else:
        train_idx, val_idx = split_indices(len(labeled), cfg.val_fraction, cfg.seed)
    logger.info(
        f"Fine-tuning {'pre-trained' if pretrained else 'baseline'} model on "
        f"{train_idx.size} windows ({val_idx.size} for validation)"
    )
    trainer = Trainer(
        network,
        ClassifierObjective(labels),
        x,
        cfg,
        train_idx,
        val_idx,
        kind="finetune",
    )
    return finish(trainer, checkpoint_path, metadata)


def predict(
    network: PimNetwork, windows: Union[Sequence[Window], np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """Class ids and softmax probabilities, with dropout off.

    Raises:
        ShapeMismatchError: If the windows do not fit the network or it has
            no classifier
    """
    if CLASSIFIER not in network.heads:
        raise ShapeMismatchError("the network has no classifier head")
    x = windows if isinstance(windows, np.ndarray) else stack_windows(windows)
    network.check_input(x)
    if len(x) == 0:
        raise EmptyInputError("no windows to predict")
    head = network.heads[CLASSIFIER]
    probs = np.concatenate(
        [
            softmax(head.forward(network.embed(x[start : start + EVAL_BATCH_SIZE])))
            for start in range(0, len(x), EVAL_BATCH_SIZE)
        ]
    )
    return probs.argmax(axis=1), probs
