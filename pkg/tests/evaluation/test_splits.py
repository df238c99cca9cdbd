"""Tests for subject partitions and LOSO folds."""

import numpy as np
import pytest

from pim_har.errors import ConfigError, ExperimentError, TooFewSubjectsError
from pim_har.evaluation.splits import (
    assert_excludes,
    make_loso_folds,
    make_split_plan,
    partition_subjects,
)
from pim_har.models.config import DatasetConfig
from pim_har.models.series import Window

SUBJECTS = ["1", "2", "3", "4", "5"]


def test_loso_folds() -> None:
    """Test one fold per distinct subject, each held out exactly once."""
    folds = make_loso_folds(["3", "1", "2", "1"])
    assert folds == [(["2", "3"], "1"), (["1", "3"], "2"), (["1", "2"], "3")]
    for train, test in folds:
        assert test not in train


def test_loso_needs_two_subjects() -> None:
    """Test a single subject cannot be cross-validated."""
    with pytest.raises(TooFewSubjectsError):
        make_loso_folds(["1", "1"])


def test_alternating_partition() -> None:
    """Test sorted subjects alternate starting with pre-training."""
    pretrain, downstream = partition_subjects(DatasetConfig(), SUBJECTS)
    assert pretrain == ["1", "3", "5"]
    assert downstream == ["2", "4"]


def test_configured_partition_fills_other_side() -> None:
    """Test an empty side receives every remaining subject."""
    cfg = DatasetConfig.model_validate({"pretrain_subjects": [1, 2]})
    assert partition_subjects(cfg, SUBJECTS) == (["1", "2"], ["3", "4", "5"])
    cfg = DatasetConfig(downstream_subjects=["5"])
    assert partition_subjects(cfg, SUBJECTS) == (["1", "2", "3", "4"], ["5"])


def test_configured_subject_without_data() -> None:
    """Test a configured subject missing from the corpus."""
    with pytest.raises(ConfigError):
        partition_subjects(DatasetConfig(pretrain_subjects=["9"]), SUBJECTS)


def test_split_plan_rejects_overlap() -> None:
    """Test a subject may not serve both pre-training and evaluation."""
    cfg = DatasetConfig(pretrain_subjects=["1", "2"], downstream_subjects=["2", "3"])
    with pytest.raises(ConfigError):
        make_split_plan(cfg, SUBJECTS)


def test_split_plan_max_folds() -> None:
    """Test truncating the fold list."""
    plan = make_split_plan(DatasetConfig(), SUBJECTS + ["6"], max_folds=2)
    assert plan.downstream_subjects == ["2", "4", "6"]
    assert [test for _, test in plan.folds] == ["2", "4"]


def test_assert_excludes() -> None:
    """Test the leakage guard."""
    windows = [
        Window(data=np.zeros((1, 4)), subject_id=s) for s in ("1", "2", "3")
    ]
    assert_excludes(windows, ["4"], "pre-training")
    with pytest.raises(ExperimentError, match="pre-training"):
        assert_excludes(windows, ["2", "4"], "pre-training")
