"""Losses returning their mean value together with the gradient w.r.t. logits."""

from typing import Sequence, Tuple, Union

import numpy as np
from scipy import special

from pim_har.errors import IndexOutOfRangeError, ShapeMismatchError


def bce_with_logits(
    logits: np.ndarray, targets: np.ndarray
) -> Tuple[float, np.ndarray]:
    """Binary cross-entropy on logits, averaged over every element.

    Uses ``max(z, 0) - z·t + log(1 + exp(-|z|))`` so large logits never overflow.

    Raises:
        ShapeMismatchError: If logits and targets differ in shape
    """
    if logits.shape != targets.shape:
        raise ShapeMismatchError(
            f"BCE logits {logits.shape} and targets {targets.shape} differ"
        )
    softplus = np.log1p(np.exp(-np.abs(logits)))
    losses = np.maximum(logits, 0.0) - logits * targets + softplus
    grad = (special.expit(logits) - targets) / logits.size
    return float(losses.mean()), grad


def cross_entropy(
    logits: np.ndarray, target_ids: Union[Sequence[int], np.ndarray]
) -> Tuple[float, np.ndarray]:
    """Mean negative log-softmax of the target class of each row.

    Raises:
        ShapeMismatchError: If there is not one target per row
        IndexOutOfRangeError: If a target id is outside the class axis
    """
    targets = np.asarray(target_ids, dtype=np.int64)
    if logits.ndim != 2 or targets.shape != (logits.shape[0],):
        raise ShapeMismatchError(
            f"CE logits {logits.shape} need one target per row, got {targets.shape}"
        )
    n_classes = logits.shape[1]
    if np.any((targets < 0) | (targets >= n_classes)):
        raise IndexOutOfRangeError(f"target ids must lie in [0, {n_classes - 1}]")
    log_probs = special.log_softmax(logits, axis=1)
    rows = np.arange(logits.shape[0])
    grad = np.exp(log_probs)
    grad[rows, targets] -= 1.0
    return float(-log_probs[rows, targets].mean()), grad / logits.shape[0]
