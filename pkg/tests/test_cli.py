from pathlib import Path
from unittest.mock import patch

import pytest

from pim_har.cli import EXIT_PIM_ERROR, build_parser, main
from pim_har.errors import IngestError
from pim_har.models.reports import ExperimentReport, MetricReport
from pim_har.renderers.json_renderer import JSONRenderer


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    path = tmp_path / "experiment.yaml"
    path.write_text(
        "preset: synthetic\nsynthetic:\n  n_subjects: 2\n  duration_s: 4.0\n"
    )
    return path


def test_parse_finetune_arguments() -> None:
    """Test budget parsing and defaults of the finetune command."""
    args = build_parser().parse_args(
        [
            "finetune",
            "--config",
            "c.yaml",
            "--cache",
            "cache.npz",
            "--test-subject",
            "3",
            "--budget",
            "10%",
            "--out",
            "fold.ckpt",
        ]
    )
    assert args.budget == "10%"
    assert args.seed == 0
    assert args.checkpoint is None
    assert args.test_subject == "3"


def test_config_is_required() -> None:
    """Test pipeline commands refuse to run without a config."""
    with pytest.raises(SystemExit):
        build_parser().parse_args(["synth", "--out", "data"])


def test_synth_command(tmp_path: Path, config_file: Path) -> None:
    """Test writing the synthetic corpus from the command line."""
    out = tmp_path / "data"
    assert main(["synth", "--config", str(config_file), "--out", str(out)]) == 0
    assert len(list(out.glob("*/*.csv"))) == 2 * 4 * 4


def test_missing_config_exits_with_error(tmp_path: Path) -> None:
    """Test a pipeline error maps to the error exit code."""
    argv = ["synth", "--config", str(tmp_path / "none.yaml"), "--out", str(tmp_path)]
    assert main(argv) == EXIT_PIM_ERROR


def test_stage_error_exits_with_error(tmp_path: Path, config_file: Path) -> None:
    """Test errors raised inside a stage are reported, not raised."""
    with patch("pim_har.cli.PimApplication") as app_cls:
        app_cls.return_value.ingest.side_effect = IngestError("bad csv")
        code = main(
            [
                "ingest",
                "--config",
                str(config_file),
                "--data-dir",
                str(tmp_path),
                "--out",
                str(tmp_path / "cache.npz"),
            ]
        )
    assert code == EXIT_PIM_ERROR
    app_cls.return_value.ingest.assert_called_once_with(
        tmp_path, tmp_path / "cache.npz"
    )


def test_report_command(tmp_path: Path) -> None:
    """Test aggregating a metrics file without an experiment config."""
    metrics = tmp_path / "metrics.json"
    JSONRenderer(ExperimentReport).render_to_file(
        ExperimentReport(
            name="dsads",
            fingerprint="abc",
            seeds=[0],
            reports=[
                MetricReport(
                    method="pim", budget=4, macro_f1_runs=[0.8], accuracy_runs=[0.9]
                )
            ],
        ),
        metrics,
    )
    out_dir = tmp_path / "summary"
    assert main(["report", "--runs", str(metrics), "--out-dir", str(out_dir)]) == 0
    assert "| pim | 4 | 1 |" in (out_dir / "summary.md").read_text()


def test_report_on_missing_run_file_exits_with_error(tmp_path: Path) -> None:
    """Test that an unreadable metrics file is a clean pipeline error."""
    argv = ["report", "--runs", str(tmp_path / "none.json"), "--out-dir", str(tmp_path)]
    assert main(argv) == EXIT_PIM_ERROR
