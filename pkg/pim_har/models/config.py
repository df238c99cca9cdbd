"""Experiment configuration models and their file loading."""

import hashlib
import json
import math
import re
from enum import Enum
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from pim_har.errors import ConfigError

from .constants import (
    BATCH_SIZE,
    DEFAULT_STEP_SECONDS,
    DEFAULT_WINDOW_SECONDS,
    FEW_SHOT_MAX_K,
    FILTER_CUTOFF_HZ,
    FILTER_ORDER,
    LEARNING_RATE,
    MADGWICK_BETA,
    MAX_EPOCHS,
    N_RUNS,
    PERMUTE_SEGMENTS,
    VAL_FRACTION,
    WARP_KNOTS,
    WARP_SIGMA,
)
from .network import EncoderSpec, LossWeights

PRESETS_DIR = Path(__file__).parent.parent / "presets"

Budget = Union[int, str]
_PERCENT_BUDGET = re.compile(r"^\d+(\.\d+)?%$")


class SamTask(str, Enum):
    """The three pre-training task families."""

    ANGLE = "angle"
    MOTION = "motion"
    SYMMETRY = "symmetry"


ALL_TASKS: FrozenSet[SamTask] = frozenset(SamTask)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class LimbPair(_Section):
    """Two sensor positions whose symmetry is measured."""

    name: str
    left: str
    right: str


class DatasetConfig(_Section):
    """Where the data lives and how it is partitioned."""

    data_dir: Optional[Path] = None
    sample_rate_hz: float = Field(50.0, gt=0)
    sensors: Optional[List[str]] = None
    pairs: Optional[List[LimbPair]] = None
    label_column: str = "label"
    ignore_labels: List[int] = Field(default_factory=list)
    pretrain_subjects: List[str] = Field(default_factory=list)
    downstream_subjects: List[str] = Field(default_factory=list)

    @field_validator("pretrain_subjects", "downstream_subjects", mode="before")
    @classmethod
    def coerce_subjects(cls, v: Any) -> Any:
        """Accept integer subject ids from YAML."""
        if isinstance(v, list):
            return [str(s) for s in v]
        return v


class WindowingConfig(_Section):
    """Sliding-window geometry, in seconds unless sample counts are given."""

    window_seconds: float = Field(DEFAULT_WINDOW_SECONDS, gt=0)
    step_seconds: float = Field(DEFAULT_STEP_SECONDS, gt=0)
    window_len: Optional[int] = Field(None, ge=1)
    step: Optional[int] = Field(None, ge=1)

    def resolve(self, sample_rate_hz: float) -> Tuple[int, int]:
        """Window length and step in samples for ``sample_rate_hz``."""
        window_len = self.window_len or int(round(self.window_seconds * sample_rate_hz))
        step = self.step or max(1, int(round(self.step_seconds * sample_rate_hz)))
        return window_len, step


class FilterConfig(_Section):
    """Butterworth filter used for gravity separation and de-noising."""

    order: int = Field(FILTER_ORDER, ge=1)
    cutoff_hz: float = Field(FILTER_CUTOFF_HZ, gt=0)


class PseudoLabelConfig(_Section):
    """Which SAM families to compute and how to discretize them."""

    tasks: List[SamTask] = Field(default_factory=lambda: list(SamTask))
    angle_binning: Literal["fixed", "fitted"] = "fixed"
    dtw_band: Optional[int] = Field(None, ge=0)
    madgwick_beta: float = Field(MADGWICK_BETA, gt=0)
    use_ahrs: bool = True


class AugmentationConfig(_Section):
    """Pre-training augmentation knobs."""

    enabled: bool = True
    permute_segments: int = Field(PERMUTE_SEGMENTS, ge=2)
    warp_knots: int = Field(WARP_KNOTS, ge=2)
    warp_sigma: float = Field(WARP_SIGMA, ge=0)


class Precision(str, Enum):
    """Floating point precision of training."""

    FLOAT64 = "float64"
    FLOAT32 = "float32"


class TrainConfig(_Section):
    """Optimizer and loop settings for one training phase."""

    lr: float = Field(LEARNING_RATE, gt=0)
    max_epochs: int = Field(MAX_EPOCHS, ge=1)
    batch_size: int = Field(BATCH_SIZE, ge=1)
    seed: int = 0
    val_fraction: float = Field(VAL_FRACTION, ge=0.0, lt=1.0)
    patience: int = Field(MAX_EPOCHS, ge=1)
    precision: Precision = Precision.FLOAT64


class MethodSpec(BaseModel):
    """A named training strategy: from-scratch baseline or PIM on some families."""

    model_config = ConfigDict(frozen=True)

    name: str
    tasks: Optional[FrozenSet[SamTask]] = None

    @property
    def is_baseline(self) -> bool:
        return self.tasks is None

    @classmethod
    def parse(cls, text: str, enabled: FrozenSet[SamTask] = ALL_TASKS) -> "MethodSpec":
        """Parse ``baseline``, ``pim`` or ``pim:<family>[+<family>...]``.

        Raises:
            ConfigError: If the method string is malformed
        """
        text = text.strip()
        if text == "baseline":
            return cls(name=text)
        if text == "pim":
            return cls(name=text, tasks=frozenset(enabled))
        if text.startswith("pim:"):
            try:
                tasks = frozenset(SamTask(t) for t in text[4:].split("+") if t)
            except ValueError as e:
                raise ConfigError(f"Unknown SAM family in method {text!r}") from e
            if not tasks:
                raise ConfigError(f"Method {text!r} names no SAM family")
            return cls(name=text, tasks=tasks)
        raise ConfigError(f"Unknown method {text!r}")


class EvaluationConfig(_Section):
    """Protocol of the downstream evaluation."""

    n_runs: int = Field(N_RUNS, ge=1)
    base_seed: int = 0
    budgets: List[Budget] = Field(default_factory=lambda: [2, 4, 8, "all"])
    methods: List[str] = Field(default_factory=lambda: ["baseline", "pim"])
    few_shot_max_k: int = Field(FEW_SHOT_MAX_K, ge=1)
    max_folds: Optional[int] = Field(None, ge=1)
    pretrain_per_seed: bool = False

    @field_validator("budgets")
    @classmethod
    def validate_budgets(cls, v: List[Budget]) -> List[Budget]:
        """Validate integer, ``all`` and percentage budgets."""
        for budget in v:
            if isinstance(budget, int):
                if budget < 1:
                    raise ValueError("integer budgets must be >= 1 example per class")
            elif budget != "all" and not _PERCENT_BUDGET.match(budget):
                raise ValueError(f"budget {budget!r} is not an int, 'all' or 'NN%'")
        return v

    @property
    def seeds(self) -> List[int]:
        """Seeds of the repeated runs."""
        return [self.base_seed + i for i in range(self.n_runs)]


class ClassMotion(_Section):
    """Motion parameters of one synthetic activity class."""

    name: str
    freq_hz: float = Field(1.0, ge=0)
    amplitude_left: float = Field(0.0, ge=0)
    amplitude_right: float = Field(0.0, ge=0)
    tilt_rad: float = 0.0
    phase_rad: float = 0.0


def _default_classes() -> List[ClassMotion]:
    return [
        ClassMotion(name="still", freq_hz=1.0),
        ClassMotion(
            name="reach", freq_hz=0.5, amplitude_left=1.0, amplitude_right=1.0,
            tilt_rad=0.7,
        ),
        ClassMotion(
            name="sync_swing", freq_hz=1.5, amplitude_left=3.0, amplitude_right=3.0
        ),
        ClassMotion(
            name="alt_swing", freq_hz=1.5, amplitude_left=3.0, amplitude_right=3.0,
            phase_rad=math.pi,
        ),
    ]


class SyntheticSpec(_Section):
    """Desk-scale stand-in corpus whose classes differ along SAM families."""

    classes: List[ClassMotion] = Field(default_factory=_default_classes)
    positions: List[str] = Field(default_factory=lambda: ["left_arm", "right_arm"])
    with_gyro: bool = False
    noise_sigma: float = Field(0.05, ge=0)
    subject_variation: float = Field(0.15, ge=0)
    n_subjects: int = Field(6, ge=1)
    sample_rate_hz: float = Field(50.0, gt=0)
    duration_s: float = Field(20.0, gt=0)
    # Sensors are re-attached for every session, upside down with this chance
    sessions_per_class: int = Field(1, ge=1)
    upside_down_probability: float = Field(0.0, ge=0, le=1)

    @property
    def n_classes(self) -> int:
        return len(self.classes)


class ExperimentConfig(_Section):
    """A complete experiment: data, pseudo-labels, model, training and protocol."""

    name: str = "experiment"
    preset: Optional[str] = None
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    windowing: WindowingConfig = Field(default_factory=WindowingConfig)
    filters: FilterConfig = Field(default_factory=FilterConfig)
    pseudo_labels: PseudoLabelConfig = Field(default_factory=PseudoLabelConfig)
    augmentation: AugmentationConfig = Field(default_factory=AugmentationConfig)
    encoder: EncoderSpec = Field(default_factory=EncoderSpec)
    pretrain: TrainConfig = Field(default_factory=TrainConfig)
    finetune: TrainConfig = Field(default_factory=TrainConfig)
    loss_weights: LossWeights = Field(default_factory=LossWeights)
    evaluation: EvaluationConfig = Field(default_factory=EvaluationConfig)
    synthetic: SyntheticSpec = Field(default_factory=SyntheticSpec)
    n_jobs: int = 1

    def fingerprint(self) -> str:
        """SHA-256 of the canonical JSON form of this configuration.

        The data directory is left out: moving a corpus keeps its fingerprint.
        """
        values = self.model_dump(mode="json", exclude={"dataset": {"data_dir"}})
        canonical = json.dumps(values, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def methods(self) -> List[MethodSpec]:
        """Parsed evaluation methods."""
        enabled = frozenset(self.pseudo_labels.tasks)
        return [MethodSpec.parse(m, enabled) for m in self.evaluation.methods]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        """Build a config, layering it over its ``preset`` when one is named.

        Raises:
            ConfigError: If the preset is unknown or validation fails
        """
        preset = data.get("preset")
        if preset:
            data = _deep_merge(load_preset(preset), data)
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid experiment configuration: {e}") from e

    @classmethod
    def from_file(cls, path: Path) -> "ExperimentConfig":
        """Load a YAML or JSON configuration file.

        Raises:
            ConfigError: If the file cannot be read or is invalid
        """
        try:
            data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Error loading configuration {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Configuration {path} must be a mapping")
        return cls.from_dict(data)


def load_preset(name: str) -> Dict[str, Any]:
    """Load a shipped dataset preset by name.

    Raises:
        ConfigError: If no preset of that name exists
    """
    path = PRESETS_DIR / f"{name}.yaml"
    if not path.exists():
        available = sorted(p.stem for p in PRESETS_DIR.glob("*.yaml"))
        raise ConfigError(f"Unknown preset {name!r}; available: {available}")
    return yaml.safe_load(path.read_text(encoding="utf-8")) or {}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged
