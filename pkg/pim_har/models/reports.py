"""Models for splits, training histories and evaluation reports."""

from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, computed_field, model_validator

from .config import Budget


class SplitPlan(BaseModel):
    """Subject partition and LOSO folds of one experiment."""

    pretrain_subjects: List[str]
    downstream_subjects: List[str]
    folds: List[Tuple[List[str], str]] = Field(
        default_factory=list, description="(train subjects, test subject) pairs"
    )

    @model_validator(mode="after")
    def validate_partition(self) -> "SplitPlan":
        """Validate disjoint partitions and one test appearance per subject."""
        overlap = set(self.pretrain_subjects) & set(self.downstream_subjects)
        if overlap:
            raise ValueError(
                f"pretrain and downstream subjects overlap: {sorted(overlap)}"
            )
        tests = [test for _, test in self.folds]
        if len(tests) != len(set(tests)):
            raise ValueError("a subject is held out by more than one fold")
        for train, test in self.folds:
            if test in train:
                raise ValueError(f"fold test subject {test!r} is in its training set")
        return self


class EpochRecord(BaseModel):
    """Losses of one training epoch."""

    epoch: int
    train_loss: float
    val_loss: Optional[float] = None
    per_term: Dict[str, float] = Field(default_factory=dict)


class FoldResult(BaseModel):
    """Metrics of one (seed, fold) fine-tuning run."""

    fold: str
    seed: int
    macro_f1: float = Field(..., ge=0.0, le=1.0)
    accuracy: float = Field(..., ge=0.0, le=1.0)
    n_train: int
    n_test: int


def _sample_std(values: List[float]) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1))


class MetricReport(BaseModel):
    """Mean and sample standard deviation of one (method, budget) cell.

    Each per-run value is the mean over that seed's LOSO folds.
    """

    method: str
    budget: Budget
    macro_f1_runs: List[float]
    accuracy_runs: List[float]
    folds: List[FoldResult] = Field(default_factory=list)
    fingerprint: str = ""

    @model_validator(mode="after")
    def validate_runs(self) -> "MetricReport":
        """Validate equal run counts and metric ranges."""
        if len(self.macro_f1_runs) != len(self.accuracy_runs):
            raise ValueError("macro F1 and accuracy need one value per run each")
        if any(not 0.0 <= v <= 1.0 for v in self.macro_f1_runs + self.accuracy_runs):
            raise ValueError("metrics must lie in [0, 1]")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def n_runs(self) -> int:
        return len(self.macro_f1_runs)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def macro_f1_mean(self) -> float:
        return float(np.mean(self.macro_f1_runs)) if self.macro_f1_runs else 0.0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def macro_f1_std(self) -> float:
        return _sample_std(self.macro_f1_runs)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def accuracy_mean(self) -> float:
        return float(np.mean(self.accuracy_runs)) if self.accuracy_runs else 0.0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def accuracy_std(self) -> float:
        return _sample_std(self.accuracy_runs)


class ExperimentReport(BaseModel):
    """Every metric cell of one experiment plus its provenance."""

    name: str
    fingerprint: str
    seeds: List[int]
    reports: List[MetricReport]

    def cell(self, method: str, budget: Budget) -> MetricReport:
        """Return the report of one (method, budget) cell.

        Raises:
            KeyError: If the experiment did not evaluate that cell
        """
        for report in self.reports:
            if report.method == method and str(report.budget) == str(budget):
                return report
        raise KeyError(f"No report for method={method!r}, budget={budget!r}")
