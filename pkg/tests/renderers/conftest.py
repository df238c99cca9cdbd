import pytest

from pim_har.models.reports import ExperimentReport, FoldResult, MetricReport


@pytest.fixture
def sample_report() -> ExperimentReport:
    folds = [
        FoldResult(fold="2", seed=0, macro_f1=0.5, accuracy=0.6, n_train=8, n_test=20),
        FoldResult(fold="2", seed=1, macro_f1=0.7, accuracy=0.8, n_train=8, n_test=20),
    ]
    return ExperimentReport(
        name="synthetic",
        fingerprint="f" * 64,
        seeds=[0, 1],
        reports=[
            MetricReport(
                method="baseline",
                budget=2,
                macro_f1_runs=[0.5, 0.7],
                accuracy_runs=[0.6, 0.8],
                folds=folds,
            ),
            MetricReport(
                method="pim",
                budget="all",
                macro_f1_runs=[0.9],
                accuracy_runs=[0.95],
            ),
        ],
    )
