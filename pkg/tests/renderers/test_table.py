import io

import pandas as pd
import pytest

from pim_har.models.reports import ExperimentReport
from pim_har.renderers.table import COLUMNS, TSVRenderer, summary_frame


def test_summary_frame(sample_report: ExperimentReport) -> None:
    """Test one row per cell with mean and sample std."""
    frame = summary_frame([sample_report])
    assert list(frame.columns) == COLUMNS
    assert frame["budget"].tolist() == ["2", "all"]
    assert frame.loc[0, "macro_f1_std"] == pytest.approx(0.1414213562)
    assert frame.loc[1, "macro_f1_std"] == 0.0


def test_tsv_rendering(sample_report: ExperimentReport) -> None:
    """Test tab-separated output readable by pandas."""
    text = TSVRenderer().render_to_string([sample_report])
    assert text.splitlines()[0].split("\t") == COLUMNS
    frame = pd.read_csv(io.StringIO(text), sep="\t")
    assert frame["accuracy_mean"].tolist() == pytest.approx([0.7, 0.95])
    assert frame["n_runs"].tolist() == [2, 1]
