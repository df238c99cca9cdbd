"""Classification metrics of a fold."""

from typing import Optional, Sequence, Tuple, Union

import numpy as np
from sklearn.metrics import accuracy_score, f1_score

from pim_har.errors import EmptyInputError, IndexOutOfRangeError, LengthMismatchError

Ids = Union[Sequence[int], np.ndarray]


def _check(pred: Ids, truth: Ids) -> Tuple[np.ndarray, np.ndarray]:
    pred_arr = np.asarray(pred, dtype=np.int64)
    truth_arr = np.asarray(truth, dtype=np.int64)
    if pred_arr.shape != truth_arr.shape:
        raise LengthMismatchError(
            f"{pred_arr.size} predictions for {truth_arr.size} true labels"
        )
    if pred_arr.size == 0:
        raise EmptyInputError("no predictions to score")
    return pred_arr, truth_arr


def macro_f1(pred: Ids, truth: Ids, n_classes: Optional[int] = None) -> float:
    """Unweighted mean of per-class F1.

    Classes that appear in neither ``pred`` nor ``truth`` are left out of the
    mean; a class that is present but never predicted correctly counts as 0.

    Raises:
        LengthMismatchError: If the inputs differ in length
        EmptyInputError: If there is nothing to score
        IndexOutOfRangeError: If an id is outside ``[0, n_classes)``
    """
    pred_arr, truth_arr = _check(pred, truth)
    labels = np.union1d(pred_arr, truth_arr)
    if n_classes is not None and (labels.min() < 0 or labels.max() >= n_classes):
        raise IndexOutOfRangeError(f"class ids must lie in [0, {n_classes - 1}]")
    return float(
        f1_score(
            truth_arr, pred_arr, labels=labels, average="macro", zero_division=0
        )
    )


def accuracy(pred: Ids, truth: Ids) -> float:
    """Fraction of correct predictions.

    Raises:
        LengthMismatchError: If the inputs differ in length
        EmptyInputError: If there is nothing to score
    """
    pred_arr, truth_arr = _check(pred, truth)
    return float(accuracy_score(truth_arr, pred_arr))
