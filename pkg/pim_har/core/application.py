"""File-level orchestration of the pipeline stages used by the CLI."""

from pathlib import Path
from typing import List, Optional, Sequence

from pim_har.errors import ConfigError
from pim_har.evaluation.experiment import (
    FoldJob,
    prepare_cache,
    pretrain_encoder,
    run_experiment,
    run_fold,
)
from pim_har.evaluation.splits import make_split_plan
from pim_har.evaluation.synthetic import generate_synthetic
from pim_har.logger import logger
from pim_har.models.config import Budget, ExperimentConfig, MethodSpec
from pim_har.models.context import run_context
from pim_har.models.labels import DiscretizerSet
from pim_har.models.reports import ExperimentReport, FoldResult
from pim_har.pseudo_labels.builder import build_pseudo_labels, fit_pseudo_labels
from pim_har.renderers.json_renderer import JSONListRenderer, JSONRenderer
from pim_har.renderers.jsonl import HistoryRenderer, PseudoLabelRenderer
from pim_har.renderers.markdown import MarkdownRenderer
from pim_har.renderers.table import TSVRenderer
from pim_har.timeseries.cache import load_cache, save_cache
from pim_har.timeseries.ingest import write_series_csv
from pim_har.training.trainer import load_trained

PSEUDO_LABELS_FILE = "pseudo_labels.jsonl"
DISCRETIZERS_FILE = "discretizers.json"


def parse_budget(text: str) -> Budget:
    """Parse ``all``, ``NN%`` or an integer count per class.

    Raises:
        ConfigError: If the text is none of these
    """
    text = text.strip()
    if text == "all" or text.endswith("%"):
        return text
    try:
        return int(text)
    except ValueError as e:
        raise ConfigError(f"Budget {text!r} is not an int, 'all' or 'NN%'") from e


def history_path(checkpoint: Path) -> Path:
    """Training curve written next to a checkpoint."""
    return checkpoint.with_name(f"{checkpoint.stem}.history.jsonl")


class PimApplication:
    """Runs each pipeline stage from files to files for one experiment config.

    The stages hand their results to each other through files:

    ```python
    app = PimApplication(ExperimentConfig.from_file(Path("dsads.yaml")))
    app.ingest(Path("data/dsads"), Path("cache.npz"))
    app.pseudolabel(Path("cache.npz"), Path("labels"))
    app.pretrain(Path("cache.npz"), Path("labels"), Path("pim.ckpt"))
    report = app.evaluate(Path("cache.npz"), Path("metrics.json"))
    ```
    """

    def __init__(self, config: ExperimentConfig) -> None:
        """Initialize the application.

        Args:
            config: Experiment configuration shared by every stage
        """
        self.config = config

    def synth(self, out_dir: Path) -> int:
        """Write the synthetic corpus as ``<out_dir>/<subject>/<class>.csv``.

        Returns:
            Number of written sessions
        """
        series = generate_synthetic(
            self.config.synthetic, self.config.evaluation.base_seed
        )
        for s in series:
            write_series_csv(s, out_dir / s.subject_id / f"{s.session_id}.csv")
        return len(series)

    def ingest(self, data_dir: Optional[Path], out: Path) -> int:
        """Window a CSV corpus (or the synthetic one) into a cache file.

        Returns:
            Number of cached windows
        """
        config = self.config
        if data_dir is not None:
            config = config.model_copy(
                update={
                    "dataset": config.dataset.model_copy(update={"data_dir": data_dir})
                }
            )
        with run_context(stage="ingest"):
            cache = prepare_cache(config)
            save_cache(cache, out)
        return cache.n_windows

    def pseudolabel(self, cache_path: Path, out_dir: Path) -> DiscretizerSet:
        """Fit discretizers on the pre-training subjects and export their labels."""
        cache = load_cache(cache_path)
        plan = make_split_plan(self.config.dataset, cache.subjects)
        windows = cache.select(plan.pretrain_subjects)
        with run_context(stage="pseudolabel"):
            discretizers, labeled = fit_pseudo_labels(
                windows, cache.layout, cache.sample_rate_hz, self.config
            )
        PseudoLabelRenderer(discretizers.fingerprint).render_to_file(
            labeled, out_dir / PSEUDO_LABELS_FILE
        )
        JSONRenderer(DiscretizerSet).render_to_file(
            discretizers, out_dir / DISCRETIZERS_FILE
        )
        return discretizers

    def pretrain(
        self,
        cache_path: Path,
        labels_dir: Path,
        out: Path,
        tasks: Optional[str] = None,
    ) -> int:
        """Pre-train an encoder with the exported discretizers.

        Args:
            cache_path: Windowed corpus
            labels_dir: Output directory of :meth:`pseudolabel`
            out: Checkpoint to write; the history goes next to it
            tasks: SAM families as ``angle+motion``; all enabled ones if omitted

        Returns:
            The selected epoch
        """
        config = self.config
        enabled = frozenset(config.pseudo_labels.tasks)
        method = MethodSpec.parse(f"pim:{tasks}" if tasks else "pim", enabled)
        assert method.tasks is not None
        cache = load_cache(cache_path)
        plan = make_split_plan(config.dataset, cache.subjects)
        discretizers = JSONRenderer(DiscretizerSet).load_from_file(
            labels_dir / DISCRETIZERS_FILE
        )
        with run_context(stage="pretrain", method=method.name):
            labeled = build_pseudo_labels(
                cache.select(plan.pretrain_subjects),
                cache.layout,
                discretizers,
                cache.sample_rate_hz,
                config,
            )
            result, _ = pretrain_encoder(
                labeled,
                cache.layout,
                config,
                method.tasks,
                config.pretrain.seed,
                checkpoint_path=out,
            )
        HistoryRenderer().render_to_file(result.history, history_path(out))
        return result.best_epoch

    def finetune(
        self,
        cache_path: Path,
        checkpoint: Optional[Path],
        test_subject: str,
        seed: int,
        budget: Budget,
        out: Path,
    ) -> FoldResult:
        """Fine-tune one LOSO fold and save the model with its fold metrics."""
        cache = load_cache(cache_path)
        plan = make_split_plan(self.config.dataset, cache.subjects)
        folds = {test: (train, test) for train, test in plan.folds}
        if test_subject not in folds:
            raise ConfigError(
                f"{test_subject!r} is not a downstream subject: "
                f"{plan.downstream_subjects}"
            )
        pretrained = load_trained(checkpoint)[0] if checkpoint else None
        job = FoldJob(
            method=MethodSpec.parse("pim" if checkpoint else "baseline"),
            budget=budget,
            seed=seed,
            fold=folds[test_subject],
        )
        result = run_fold(job, cache, self.config, pretrained, checkpoint_path=out)
        JSONRenderer(FoldResult).render_to_file(
            result, out.with_name(f"{out.stem}.metrics.json")
        )
        return result

    def evaluate(self, cache_path: Optional[Path], out: Path) -> ExperimentReport:
        """Run the whole protocol and write the report as JSON."""
        cache = load_cache(cache_path) if cache_path else None
        report = run_experiment(self.config, cache)
        JSONRenderer(ExperimentReport).render_to_file(report, out)
        logger.info(f"Wrote {len(report.reports)} metric cells to {out}")
        return report


def report(runs: Sequence[Path], out_dir: Path) -> List[ExperimentReport]:
    """Aggregate metric files into ``summary.{tsv,json,md}``."""
    loader = JSONRenderer(ExperimentReport)
    reports = [loader.load_from_file(path) for path in runs]
    TSVRenderer().render_to_file(reports, out_dir / "summary.tsv")
    MarkdownRenderer().render_to_file(reports, out_dir / "summary.md")
    JSONListRenderer(ExperimentReport).render_to_file(reports, out_dir / "summary.json")
    return reports
