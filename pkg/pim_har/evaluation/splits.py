"""Subject partitions and leave-one-subject-out folds."""

from typing import Iterable, List, Optional, Sequence, Tuple

from pim_har.errors import ConfigError, ExperimentError, TooFewSubjectsError
from pim_har.logger import eval_logger as logger
from pim_har.models.config import DatasetConfig
from pim_har.models.reports import SplitPlan
from pim_har.models.series import Window

Fold = Tuple[List[str], str]


def make_loso_folds(subjects: Sequence[str]) -> List[Fold]:
    """One fold per subject, testing on it and training on all the others.

    Raises:
        TooFewSubjectsError: If fewer than two distinct subjects are given
    """
    unique = sorted(set(subjects))
    if len(unique) < 2:
        raise TooFewSubjectsError(
            f"LOSO needs at least 2 subjects, got {len(unique)}"
        )
    return [([s for s in unique if s != test], test) for test in unique]


def partition_subjects(
    cfg: DatasetConfig, available: Sequence[str]
) -> Tuple[List[str], List[str]]:
    """Pre-training and downstream subjects from the config, or alternating.

    A side left empty in the config receives every remaining subject; with both
    sides empty the sorted subjects alternate, starting with pre-training.

    Raises:
        ConfigError: If a configured subject has no data
    """
    available = sorted(set(available))
    missing = set(cfg.pretrain_subjects + cfg.downstream_subjects) - set(available)
    if missing:
        raise ConfigError(f"configured subjects without data: {sorted(missing)}")
    pretrain = list(cfg.pretrain_subjects)
    downstream = list(cfg.downstream_subjects)
    if not pretrain and not downstream:
        pretrain, downstream = available[::2], available[1::2]
    elif not pretrain:
        pretrain = [s for s in available if s not in downstream]
    elif not downstream:
        downstream = [s for s in available if s not in pretrain]
    return pretrain, downstream


def make_split_plan(
    cfg: DatasetConfig, available: Sequence[str], max_folds: Optional[int] = None
) -> SplitPlan:
    """Partition subjects and build LOSO folds over the downstream subjects."""
    pretrain, downstream = partition_subjects(cfg, available)
    folds = make_loso_folds(downstream)
    if max_folds is not None and max_folds < len(folds):
        logger.info(f"Evaluating the first {max_folds} of {len(folds)} folds")
        folds = folds[:max_folds]
    try:
        return SplitPlan(
            pretrain_subjects=pretrain, downstream_subjects=downstream, folds=folds
        )
    except ValueError as e:
        raise ConfigError(f"Invalid subject partition: {e}") from e


def assert_excludes(
    windows: Iterable[Window], subjects: Iterable[str], stage: str
) -> None:
    """Guard a stage against windows of held-out subjects.

    Raises:
        ExperimentError: If any window belongs to one of ``subjects``
    """
    forbidden = set(subjects)
    leaked = sorted({w.subject_id for w in windows} & forbidden)
    if leaked:
        raise ExperimentError(f"held-out subjects {leaked} reached {stage}")
