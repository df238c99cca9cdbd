"""Mini-batch training loop with best-validation selection and resumable state."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from pim_har.errors import CheckpointError, EmptyInputError, ShapeMismatchError
from pim_har.logger import train_logger as logger
from pim_har.models.config import SamTask, TrainConfig
from pim_har.models.constants import STREAM_DROPOUT, STREAM_SHUFFLE, STREAM_SPLIT
from pim_har.models.context import run_context
from pim_har.models.network import HeadSpec, HeadTask, LossWeights
from pim_har.models.reports import EpochRecord
from pim_har.models.series import Window
from pim_har.nn.checkpoint import read_checkpoint, write_checkpoint
from pim_har.nn.losses import bce_with_logits, cross_entropy
from pim_har.nn.optim import AdamState, adam_step, zero_grad

from .heads import CLASSIFIER, FAMILY
from .network import PimNetwork

EVAL_BATCH_SIZE = 256


class Objective(ABC):
    """Loss of a batch of windows, back-propagated into the network when training."""

    @abstractmethod
    def __call__(
        self,
        network: PimNetwork,
        x: np.ndarray,
        idx: np.ndarray,
        train: bool,
        rng: Optional[np.random.Generator],
    ) -> Tuple[float, Dict[str, float]]:
        """Return the total loss and its named terms."""
        pass


class PretrainObjective(Objective):
    """``α·L_symmetry + β·L_angle + γ·L_motion`` over the SAM heads.

    Each family loss is the mean over that family's heads; a family without
    heads contributes 0.
    """

    def __init__(
        self,
        heads: Sequence[HeadSpec],
        targets: Dict[str, np.ndarray],
        weights: LossWeights,
    ) -> None:
        self.heads = list(heads)
        self.targets = targets
        self.weights = {
            SamTask.SYMMETRY: weights.alpha,
            SamTask.ANGLE: weights.beta,
            SamTask.MOTION: weights.gamma,
        }
        self.family_sizes = {task: 0 for task in SamTask}
        for head in self.heads:
            self.family_sizes[FAMILY[head.task]] += 1

    def __call__(
        self,
        network: PimNetwork,
        x: np.ndarray,
        idx: np.ndarray,
        train: bool,
        rng: Optional[np.random.Generator],
    ) -> Tuple[float, Dict[str, float]]:
        emb = network.embed(x[idx], train, rng)
        d_emb = np.zeros_like(emb)
        terms = {task.value: 0.0 for task in SamTask}
        for head in self.heads:
            family = FAMILY[head.task]
            share = 1.0 / self.family_sizes[family]
            module = network.heads[head.name]
            logits = module.forward(emb, train, rng)
            target = self.targets[head.name][idx]
            if head.task == HeadTask.ANGLE:
                loss, grad = bce_with_logits(logits, target.astype(logits.dtype))
            else:
                loss, grad = cross_entropy(logits, target)
            terms[family.value] += share * loss
            if train:
                d_emb += module.backward(grad * (self.weights[family] * share))
        if train:
            network.encoder.backward(d_emb)
        total = sum(self.weights[task] * terms[task.value] for task in SamTask)
        return float(total), terms


class ClassifierObjective(Objective):
    """Softmax cross-entropy of the classifier head on activity labels."""

    def __init__(self, labels: np.ndarray) -> None:
        self.labels = labels

    def __call__(
        self,
        network: PimNetwork,
        x: np.ndarray,
        idx: np.ndarray,
        train: bool,
        rng: Optional[np.random.Generator],
    ) -> Tuple[float, Dict[str, float]]:
        emb = network.embed(x[idx], train, rng)
        head = network.heads[CLASSIFIER]
        loss, grad = cross_entropy(head.forward(emb, train, rng), self.labels[idx])
        if train:
            network.encoder.backward(head.backward(grad))
        return loss, {}


def stack_windows(windows: Sequence[Window]) -> np.ndarray:
    """Stack windows into ``[N, n_c, n_w]``.

    Raises:
        EmptyInputError: If no windows are given
        ShapeMismatchError: If windows differ in shape
    """
    if not windows:
        raise EmptyInputError("no windows to stack")
    shape = windows[0].data.shape
    if any(w.data.shape != shape for w in windows):
        raise ShapeMismatchError("windows differ in channel count or length")
    return np.stack([w.data for w in windows])


def split_indices(
    n: int, val_fraction: float, seed: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Seeded random train/validation split of ``n`` items.

    At least one item always stays in the training part.
    """
    order = np.random.default_rng([seed, STREAM_SPLIT]).permutation(n)
    n_val = min(int(round(n * val_fraction)), n - 1) if n > 0 else 0
    return np.sort(order[n_val:]), np.sort(order[:n_val])


class Trainer:
    """Adam training of a network on one objective.

    Every epoch reshuffles the training indices and draws dropout masks from
    streams keyed by ``(seed, epoch)``, so an epoch does not depend on how the
    run got there. That makes :meth:`save` → :meth:`restore` → continue
    bit-identical to an uninterrupted run.
    """

    def __init__(
        self,
        network: PimNetwork,
        objective: Objective,
        x: np.ndarray,
        cfg: TrainConfig,
        train_idx: np.ndarray,
        val_idx: Optional[np.ndarray] = None,
        kind: str = "train",
    ) -> None:
        if train_idx.size == 0:
            raise EmptyInputError("no training windows")
        self.network = network
        self.objective = objective
        self.x = x.astype(network.dtype, copy=False)
        self.cfg = cfg
        self.train_idx = train_idx
        self.val_idx = val_idx if val_idx is not None else np.array([], dtype=np.int64)
        self.kind = kind
        self.adam = AdamState(lr=cfg.lr)
        self.epoch = 0
        self.history: List[EpochRecord] = []
        self.best_loss = math.inf
        self.best_epoch = -1
        self.best_state: Optional[Dict[str, np.ndarray]] = None

    @property
    def has_validation(self) -> bool:
        return self.val_idx.size > 0

    @property
    def stopped(self) -> bool:
        """Whether validation loss has not improved for ``patience`` epochs."""
        if not self.has_validation or self.best_epoch < 0:
            return False
        return self.epoch - 1 - self.best_epoch >= self.cfg.patience

    def _batches(self, idx: np.ndarray, size: int) -> Iterator[np.ndarray]:
        for start in range(0, idx.size, size):
            yield idx[start : start + size]

    def evaluate(self, idx: np.ndarray) -> Tuple[float, Dict[str, float]]:
        """Loss and terms over ``idx`` in eval mode, weighted by batch size."""
        total = 0.0
        terms: Dict[str, float] = {}
        for batch in self._batches(idx, EVAL_BATCH_SIZE):
            loss, batch_terms = self.objective(self.network, self.x, batch, False, None)
            total += loss * batch.size
            for name, value in batch_terms.items():
                terms[name] = terms.get(name, 0.0) + value * batch.size
        return total / idx.size, {k: v / idx.size for k, v in terms.items()}

    def run_epoch(self) -> EpochRecord:
        """Train one epoch and update the best-validation snapshot."""
        seed, epoch = self.cfg.seed, self.epoch
        order = np.random.default_rng([seed, epoch, STREAM_SHUFFLE]).permutation(
            self.train_idx
        )
        dropout_rng = np.random.default_rng([seed, epoch, STREAM_DROPOUT])
        params = self.network.parameters()

        total = 0.0
        terms: Dict[str, float] = {}
        for batch in self._batches(order, self.cfg.batch_size):
            zero_grad(params.values())
            loss, batch_terms = self.objective(
                self.network, self.x, batch, True, dropout_rng
            )
            self.adam = adam_step(params, self.adam)
            total += loss * batch.size
            for name, value in batch_terms.items():
                terms[name] = terms.get(name, 0.0) + value * batch.size

        n = order.size
        record = EpochRecord(
            epoch=epoch,
            train_loss=total / n,
            per_term={k: v / n for k, v in terms.items()},
        )
        if self.has_validation:
            record.val_loss, _ = self.evaluate(self.val_idx)
            if record.val_loss < self.best_loss:
                self.best_loss = record.val_loss
                self.best_epoch = epoch
                self.best_state = self.network.state_dict()
        else:
            self.best_loss = record.train_loss
            self.best_epoch = epoch
        self.history.append(record)
        self.epoch += 1
        return record

    def fit(self) -> List[EpochRecord]:
        """Run epochs until ``max_epochs`` or patience runs out."""
        while self.epoch < self.cfg.max_epochs and not self.stopped:
            with run_context(stage=self.kind, epoch=self.epoch):
                record = self.run_epoch()
                logger.debug(
                    f"epoch {record.epoch}: train {record.train_loss:.5f}"
                    + (
                        f" val {record.val_loss:.5f}"
                        if record.val_loss is not None
                        else ""
                    )
                )
        if self.stopped:
            logger.info(
                f"Stopped after {self.epoch} epochs; best epoch {self.best_epoch}"
            )
        return self.history

    def selected_state(self) -> Dict[str, np.ndarray]:
        """Best-validation weights, or the current ones without validation."""
        if self.best_state is not None:
            return self.best_state
        return self.network.state_dict()

    def save(self, path: Path, metadata: Optional[Dict[str, Any]] = None) -> None:
        """Write weights, optimizer moments, best snapshot and loop state.

        Raises:
            CheckpointError: If the file cannot be written
        """
        tensors: Dict[str, np.ndarray] = {}
        for name, param in self.network.parameters().items():
            tensors[f"param/{name}"] = param.value
            tensors[f"adam_m/{name}"] = param.adam_m
            tensors[f"adam_v/{name}"] = param.adam_v
        if self.best_state is not None:
            for name, value in self.best_state.items():
                tensors[f"best/{name}"] = value
        write_checkpoint(
            path,
            tensors,
            {
                **(metadata or {}),
                "network": self.network.describe(),
                "trainer": {
                    "kind": self.kind,
                    "epoch": self.epoch,
                    "adam": self.adam.model_dump(),
                    "best_loss": None if math.isinf(self.best_loss) else self.best_loss,
                    "best_epoch": self.best_epoch,
                    "history": [r.model_dump() for r in self.history],
                    "train_config": self.cfg.model_dump(mode="json"),
                },
            },
        )

    def restore(self, tensors: Dict[str, np.ndarray], state: Dict[str, Any]) -> None:
        """Load what :meth:`save` wrote into this trainer and its network.

        Raises:
            CheckpointError: If a tensor is missing from the checkpoint
        """
        try:
            for name, param in self.network.parameters().items():
                dtype = self.network.dtype
                param.value = tensors[f"param/{name}"].astype(dtype)
                param.adam_m = tensors[f"adam_m/{name}"].astype(dtype)
                param.adam_v = tensors[f"adam_v/{name}"].astype(dtype)
        except KeyError as e:
            raise CheckpointError(f"checkpoint lacks tensor {e}") from e
        best = {k[5:]: v for k, v in tensors.items() if k.startswith("best/")}
        self.best_state = (
            {k: v.astype(self.network.dtype) for k, v in best.items()} or None
        )
        self.epoch = int(state["epoch"])
        self.adam = AdamState.model_validate(state["adam"])
        best_loss = state.get("best_loss")
        self.best_loss = math.inf if best_loss is None else float(best_loss)
        self.best_epoch = int(state["best_epoch"])
        self.history = [EpochRecord.model_validate(r) for r in state["history"]]


@dataclass
class TrainResult:
    """A trained network carrying its selected weights, with the loop that made it."""

    network: PimNetwork
    history: List[EpochRecord]
    best_epoch: int
    trainer: Trainer


def finish(
    trainer: Trainer,
    checkpoint_path: Optional[Path] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> TrainResult:
    """Fit, optionally persist the resumable state, then load the selected weights."""
    trainer.fit()
    if checkpoint_path is not None:
        trainer.save(checkpoint_path, metadata)
    trainer.network.load_state_dict(trainer.selected_state())
    return TrainResult(
        network=trainer.network,
        history=list(trainer.history),
        best_epoch=trainer.best_epoch,
        trainer=trainer,
    )


def load_trained(path: Path) -> Tuple[PimNetwork, Dict[str, Any]]:
    """Rebuild a network from a checkpoint with its selected weights loaded.

    Returns:
        The network and the checkpoint metadata

    Raises:
        CheckpointError: If the file is unreadable or lacks the network layout
    """
    tensors, metadata = read_checkpoint(path)
    if "network" not in metadata:
        raise CheckpointError(f"{path} does not describe a network")
    network = PimNetwork.from_description(metadata["network"])
    prefix = "best/" if any(k.startswith("best/") for k in tensors) else "param/"
    values = {k[len(prefix) :]: v for k, v in tensors.items() if k.startswith(prefix)}
    try:
        network.load_state_dict(values)
    except ShapeMismatchError as e:
        raise CheckpointError(f"{path}: {e}") from e
    return network, metadata
