"""Tests for experiment configuration loading."""

from pathlib import Path

import pytest

from pim_har.errors import ConfigError
from pim_har.models.config import (
    ALL_TASKS,
    EvaluationConfig,
    ExperimentConfig,
    MethodSpec,
    SamTask,
    load_preset,
)


def test_defaults_follow_the_published_setup() -> None:
    """Test that an empty config carries the reference hyper-parameters."""
    cfg = ExperimentConfig()
    assert cfg.encoder.conv_channels == (32, 64, 96)
    assert cfg.encoder.kernel_sizes == (24, 16, 8)
    assert cfg.encoder.min_input_length == 46
    assert cfg.pretrain.lr == pytest.approx(0.0004)
    assert cfg.pretrain.val_fraction == pytest.approx(0.3)
    assert cfg.evaluation.n_runs == 10
    assert cfg.loss_weights.alpha == cfg.loss_weights.beta == cfg.loss_weights.gamma


def test_fingerprint_is_stable_and_sensitive() -> None:
    """Test that equal configs share a fingerprint and edits change it."""
    a = ExperimentConfig(name="x")
    b = ExperimentConfig(name="x")
    c = ExperimentConfig.from_dict({"name": "x", "pretrain": {"lr": 0.001}})
    assert a.fingerprint() == b.fingerprint()
    assert len(a.fingerprint()) == 64
    assert a.fingerprint() != c.fingerprint()


def test_fingerprint_ignores_data_dir(tmp_path: Path) -> None:
    """Test that moving the data directory keeps the fingerprint."""
    base = ExperimentConfig(name="x")
    moved = base.model_copy(
        update={"dataset": base.dataset.model_copy(update={"data_dir": tmp_path})}
    )
    assert moved.fingerprint() == base.fingerprint()


def test_unknown_keys_are_rejected() -> None:
    """Test that typos in a config surface as ConfigError."""
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"pretrian": {"lr": 0.1}})


def test_preset_is_merged_under_overrides() -> None:
    """Test that a preset supplies defaults and the file overrides them."""
    cfg = ExperimentConfig.from_dict(
        {"preset": "dsads", "dataset": {"sample_rate_hz": 50.0}}
    )
    assert cfg.dataset.sample_rate_hz == 50.0
    assert cfg.dataset.sensors is not None and "torso" in cfg.dataset.sensors
    assert cfg.windowing.window_len == 125


def test_unknown_preset() -> None:
    """Test that a missing preset names the available ones."""
    with pytest.raises(ConfigError) as exc_info:
        load_preset("nope")
    assert "pamap2" in str(exc_info.value)


@pytest.mark.parametrize("name", ["pamap2", "dsads", "wear", "mmfit", "synthetic"])
def test_shipped_presets_validate(name: str) -> None:
    """Test that every shipped preset is a valid experiment."""
    cfg = ExperimentConfig.from_dict({"preset": name})
    assert cfg.name == name


def test_from_file_reads_yaml(tmp_path: Path) -> None:
    """Test loading a YAML config file."""
    path = tmp_path / "exp.yaml"
    path.write_text("name: demo\nevaluation:\n  budgets: [2, '10%', all]\n")
    cfg = ExperimentConfig.from_file(path)
    assert cfg.name == "demo"
    assert cfg.evaluation.budgets == [2, "10%", "all"]


def test_from_file_errors(tmp_path: Path) -> None:
    """Test that unreadable or non-mapping files raise ConfigError."""
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(tmp_path / "missing.yaml")
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(path)


@pytest.mark.parametrize("budget", [0, "abc", "10", "%"])
def test_invalid_budgets(budget: object) -> None:
    """Test that malformed budgets are rejected."""
    with pytest.raises(ValueError):
        EvaluationConfig(budgets=[budget])


def test_seeds_follow_base_seed() -> None:
    """Test that run seeds count up from the base seed."""
    assert EvaluationConfig(n_runs=3, base_seed=5).seeds == [5, 6, 7]


def test_method_parsing() -> None:
    """Test baseline, full PIM and family-subset methods."""
    assert MethodSpec.parse("baseline").is_baseline
    assert MethodSpec.parse("pim").tasks == ALL_TASKS
    subset = MethodSpec.parse("pim:angle+motion")
    assert subset.tasks == frozenset({SamTask.ANGLE, SamTask.MOTION})
    limited = MethodSpec.parse("pim", frozenset({SamTask.MOTION}))
    assert limited.tasks == frozenset({SamTask.MOTION})


@pytest.mark.parametrize("text", ["pim:", "pim:walk", "resnet"])
def test_invalid_methods(text: str) -> None:
    """Test that malformed method strings raise ConfigError."""
    with pytest.raises(ConfigError):
        MethodSpec.parse(text)


def test_windowing_resolves_seconds_and_samples() -> None:
    """Test that sample counts override seconds."""
    cfg = ExperimentConfig()
    assert cfg.windowing.resolve(100.0) == (200, 50)
    explicit = ExperimentConfig.from_dict(
        {"windowing": {"window_len": 125, "step": 125}}
    )
    assert explicit.windowing.resolve(25.0) == (125, 125)
