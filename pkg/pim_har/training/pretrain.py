"""Pre-training of the encoder on SAM pseudo-labels."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from pim_har.errors import CheckpointError, NoPseudoLabelsError
from pim_har.logger import train_logger as logger
from pim_har.models.config import TrainConfig
from pim_har.models.network import EncoderSpec, HeadSpec, LossWeights
from pim_har.models.series import Window
from pim_har.nn.checkpoint import read_checkpoint

from .heads import head_targets
from .network import PimNetwork
from .trainer import (
    PretrainObjective,
    Trainer,
    TrainResult,
    finish,
    split_indices,
    stack_windows,
)

KIND = "pretrain"


def _prepare(
    windows: Sequence[Window],
    heads: Sequence[HeadSpec],
    cfg: TrainConfig,
    val_windows: Optional[Sequence[Window]],
) -> Tuple[np.ndarray, Dict[str, np.ndarray], np.ndarray, np.ndarray]:
    if not windows or any(w.pseudo is None for w in windows):
        raise NoPseudoLabelsError("every pre-training window needs pseudo-labels")
    if not heads:
        raise NoPseudoLabelsError("no SAM head to pre-train")
    everything: List[Window] = list(windows)
    if val_windows is not None:
        everything.extend(val_windows)
        train_idx = np.arange(len(windows))
        val_idx = np.arange(len(windows), len(everything))
    else:
        train_idx, val_idx = split_indices(len(windows), cfg.val_fraction, cfg.seed)
    targets = {head.name: head_targets(head, everything) for head in heads}
    return stack_windows(everything), targets, train_idx, val_idx


def pretrain(
    windows: Sequence[Window],
    heads: Sequence[HeadSpec],
    cfg: TrainConfig,
    weights: Optional[LossWeights] = None,
    encoder: Optional[EncoderSpec] = None,
    val_windows: Optional[Sequence[Window]] = None,
    checkpoint_path: Optional[Path] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> TrainResult:
    """Train encoder and SAM heads on ``α·L_sym + β·L_angle + γ·L_motion``.

    Activity labels are never read. Without ``val_windows`` the windows are
    split 70-30 (``cfg.val_fraction``) at random; the weights with the lowest
    validation loss are selected.

    Args:
        windows: Normalized, pseudo-labeled (and possibly augmented) windows
        heads: SAM heads from :func:`~pim_har.training.heads.build_heads`
        cfg: Optimizer and loop settings
        weights: Loss weights α, β, γ
        encoder: Encoder architecture
        val_windows: Explicit validation windows replacing the random split
        checkpoint_path: Where to write the resumable checkpoint
        metadata: Extra checkpoint metadata (normalization, fingerprint, ...)

    Returns:
        The network with its selected weights, and the training history

    Raises:
        NoPseudoLabelsError: If a window lacks pseudo-labels or there is no head
    """
    x, targets, train_idx, val_idx = _prepare(windows, heads, cfg, val_windows)
    network = PimNetwork(
        x.shape[1], encoder or EncoderSpec(), heads, cfg.seed, cfg.precision
    )
    network.check_input(x[:1])
    logger.info(
        f"Pre-training {len(heads)} heads on {train_idx.size} windows "
        f"({val_idx.size} for validation)"
    )
    objective = PretrainObjective(heads, targets, weights or LossWeights())
    trainer = Trainer(network, objective, x, cfg, train_idx, val_idx, kind=KIND)
    return finish(trainer, checkpoint_path, metadata)


def resume_pretrain(
    path: Path,
    windows: Sequence[Window],
    cfg: TrainConfig,
    weights: Optional[LossWeights] = None,
    val_windows: Optional[Sequence[Window]] = None,
    checkpoint_path: Optional[Path] = None,
) -> TrainResult:
    """Continue a pre-training run from its checkpoint up to ``cfg.max_epochs``.

    The windows, seed and split must be those of the interrupted run.

    Raises:
        CheckpointError: If the checkpoint is not a pre-training checkpoint
    """
    tensors, metadata = read_checkpoint(path)
    state = metadata.get("trainer")
    if state is None or state.get("kind") != KIND:
        raise CheckpointError(f"{path} is not a resumable pre-training checkpoint")
    network = PimNetwork.from_description(metadata["network"])
    heads = list(network.head_specs.values())
    x, targets, train_idx, val_idx = _prepare(windows, heads, cfg, val_windows)
    objective = PretrainObjective(heads, targets, weights or LossWeights())
    trainer = Trainer(network, objective, x, cfg, train_idx, val_idx, kind=KIND)
    trainer.restore(tensors, state)
    logger.info(f"Resuming pre-training at epoch {trainer.epoch}")
    extra = {k: v for k, v in metadata.items() if k not in ("network", "trainer")}
    return finish(trainer, checkpoint_path or path, extra)
