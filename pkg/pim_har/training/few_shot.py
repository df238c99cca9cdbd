"""Label budgets: k examples per class, a percentage per class, or everything."""

import math
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

import numpy as np

from pim_har.errors import EmptyInputError
from pim_har.logger import train_logger as logger
from pim_har.models.config import Budget
from pim_har.models.constants import FEW_SHOT_MAX_K, STREAM_FEW_SHOT
from pim_har.models.series import Window


def _by_class(windows: Sequence[Window]) -> Dict[int, List[int]]:
    groups: Dict[int, List[int]] = defaultdict(list)
    for i, w in enumerate(windows):
        if w.label is not None and w.label >= 0:
            groups[w.label].append(i)
    if not groups:
        raise EmptyInputError("no labeled window to sample from")
    return groups


def _sample(
    windows: Sequence[Window], counts: Dict[int, int], seed: int
) -> List[Window]:
    groups = _by_class(windows)
    rng = np.random.default_rng([seed, STREAM_FEW_SHOT])
    chosen: List[int] = []
    for label in sorted(groups):
        members = groups[label]
        take = counts[label]
        if take >= len(members):
            chosen.extend(members)
        else:
            chosen.extend(int(i) for i in rng.choice(members, size=take, replace=False))
    return [windows[i] for i in sorted(chosen)]


def sample_few_shot(
    windows: Sequence[Window], k_per_class: int, seed: int
) -> List[Window]:
    """Draw ``k`` windows per class uniformly without replacement.

    Classes with at most ``k`` windows are taken whole, with a warning.

    Raises:
        EmptyInputError: If no window carries a label
    """
    if k_per_class < 1:
        raise ValueError("k_per_class must be at least 1")
    groups = _by_class(windows)
    for label, members in sorted(groups.items()):
        if len(members) <= k_per_class:
            logger.warning(
                f"Class {label} has {len(members)} windows for k={k_per_class}; "
                "taking all of them"
            )
    return _sample(windows, {label: k_per_class for label in groups}, seed)


def sample_fraction(
    windows: Sequence[Window], percent: float, seed: int
) -> List[Window]:
    """Draw ``ceil(percent/100 · class size)`` windows per class (at least one)."""
    if not 0 < percent <= 100:
        raise ValueError("percent must lie in (0, 100]")
    groups = _by_class(windows)
    counts = {
        label: max(1, math.ceil(percent / 100.0 * len(members)))
        for label, members in groups.items()
    }
    return _sample(windows, counts, seed)


def apply_budget(
    windows: Sequence[Window],
    budget: Budget,
    seed: int,
    few_shot_max_k: int = FEW_SHOT_MAX_K,
) -> Tuple[List[Window], bool]:
    """Select the fine-tuning windows for a label budget.

    Returns:
        The selected windows and whether the budget is few-shot (no
        validation split, final epoch kept)
    """
    if budget == "all":
        selected = [w for w in windows if w.label is not None and w.label >= 0]
        if not selected:
            raise EmptyInputError("no labeled window to fine-tune on")
        return selected, False
    if isinstance(budget, str):
        return sample_fraction(windows, float(budget.rstrip("%")), seed), False
    return sample_few_shot(windows, budget, seed), budget <= few_shot_max_k
