import json
from pathlib import Path

import pytest

from pim_har.models.reports import EpochRecord, ExperimentReport
from pim_har.renderers.base import RendererError
from pim_har.renderers.json_renderer import JSONListRenderer, JSONRenderer


def test_render_report_to_string(sample_report: ExperimentReport) -> None:
    """Test that computed statistics are serialized alongside the runs."""
    data = json.loads(JSONRenderer(ExperimentReport).render_to_string(sample_report))
    baseline = data["reports"][0]
    assert baseline["budget"] == 2
    assert baseline["n_runs"] == 2
    assert baseline["macro_f1_mean"] == pytest.approx(0.6)
    assert baseline["folds"][1]["seed"] == 1


def test_render_and_load_file(
    tmp_path: Path, sample_report: ExperimentReport
) -> None:
    """Test writing a report to a nested path and reading it back."""
    renderer = JSONRenderer(ExperimentReport)
    path = tmp_path / "runs" / "metrics.json"
    renderer.render_to_file(sample_report, path)
    loaded = renderer.load_from_file(path)
    assert loaded.cell("pim", "all").macro_f1_runs == [0.9]
    assert loaded.cell("baseline", 2).accuracy_std == pytest.approx(
        sample_report.cell("baseline", 2).accuracy_std
    )


def test_load_errors(tmp_path: Path) -> None:
    """Test missing files, malformed JSON and invalid content."""
    renderer = JSONRenderer(ExperimentReport)
    with pytest.raises(RendererError):
        renderer.load_from_file(tmp_path / "missing.json")
    with pytest.raises(RendererError):
        renderer.load_from_string("{not json")
    with pytest.raises(RendererError):
        renderer.load_from_string('{"name": "x"}')


def test_list_renderer() -> None:
    """Test rendering a JSON array of models."""
    records = [
        EpochRecord(epoch=0, train_loss=1.5),
        EpochRecord(epoch=1, train_loss=1.0),
    ]
    data = json.loads(JSONListRenderer(EpochRecord).render_to_string(records))
    assert [r["train_loss"] for r in data] == [1.5, 1.0]
