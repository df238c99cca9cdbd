"""The evaluation protocol: pre-train per family set, then LOSO fine-tuning."""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from pim_har.augment.oversample import build_pretrain_set
from pim_har.errors import ExperimentError, PimError
from pim_har.logger import eval_logger as logger
from pim_har.models.config import Budget, ExperimentConfig, MethodSpec, SamTask
from pim_har.models.context import run_context
from pim_har.models.reports import ExperimentReport, FoldResult, MetricReport, SplitPlan
from pim_har.models.series import ChannelSpec, NormalizationStats, Window
from pim_har.pseudo_labels.builder import (
    fit_pseudo_labels,
    limb_pairs,
    sensor_positions,
)
from pim_har.timeseries.cache import WindowCache, build_cache
from pim_har.timeseries.ingest import load_corpus
from pim_har.timeseries.normalization import apply_normalization, fit_normalization
from pim_har.training.few_shot import apply_budget
from pim_har.training.finetune import finetune, predict
from pim_har.training.heads import build_heads
from pim_har.training.network import PimNetwork
from pim_har.training.pretrain import pretrain
from pim_har.training.trainer import TrainResult, split_indices

from .metrics import accuracy, macro_f1
from .splits import Fold, assert_excludes, make_split_plan
from .synthetic import generate_synthetic

Tasks = FrozenSet[SamTask]


def prepare_cache(cfg: ExperimentConfig) -> WindowCache:
    """Window the configured corpus, or the synthetic one without ``data_dir``."""
    dataset = cfg.dataset
    if dataset.data_dir is not None:
        subjects = None
        if dataset.pretrain_subjects and dataset.downstream_subjects:
            subjects = dataset.pretrain_subjects + dataset.downstream_subjects
        series = load_corpus(
            dataset.data_dir,
            dataset.sample_rate_hz,
            dataset.label_column,
            dataset.sensors,
            subjects,
        )
    else:
        series = generate_synthetic(cfg.synthetic, cfg.evaluation.base_seed)
    return build_cache(series, cfg)


def _normalized(
    windows: Sequence[Window], stats: NormalizationStats
) -> List[Window]:
    return [apply_normalization(w, stats) for w in windows]


def pretrain_encoder(
    labeled_windows: Sequence[Window],
    layout: Sequence[ChannelSpec],
    cfg: ExperimentConfig,
    tasks: Tasks,
    seed: int,
    checkpoint_path: Optional[Path] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> Tuple[TrainResult, NormalizationStats]:
    """Pre-train on pseudo-labeled raw windows for the SAM families ``tasks``.

    The windows are split 70-30 before augmentation so no augmented copy of a
    validation window is trained on. Normalization is fitted on the training
    part only.
    """
    train_idx, val_idx = split_indices(
        len(labeled_windows), cfg.pretrain.val_fraction, seed
    )
    train = [labeled_windows[i] for i in train_idx]
    val = [labeled_windows[i] for i in val_idx]
    stats = fit_normalization(train)
    train, val = _normalized(train, stats), _normalized(val, stats)
    if cfg.augmentation.enabled:
        train = build_pretrain_set(train, seed, cfg.augmentation)

    positions = sensor_positions(layout, cfg.dataset.sensors)
    heads = build_heads(positions, limb_pairs(positions, cfg.dataset.pairs), tasks)
    train_cfg = cfg.pretrain.model_copy(update={"seed": seed})
    result = pretrain(
        train,
        heads,
        train_cfg,
        cfg.loss_weights,
        cfg.encoder,
        val_windows=val or None,
        checkpoint_path=checkpoint_path,
        metadata={
            **(metadata or {}),
            "normalization": stats.model_dump(),
            "fingerprint": cfg.fingerprint(),
            "tasks": sorted(t.value for t in tasks),
            "layout": [c.model_dump(mode="json") for c in layout],
        },
    )
    return result, stats


@dataclass(frozen=True)
class FoldJob:
    """One fine-tuning run of the protocol."""

    method: MethodSpec
    budget: Budget
    seed: int
    fold: Fold


def run_fold(
    job: FoldJob,
    cache: WindowCache,
    cfg: ExperimentConfig,
    pretrained: Optional[PimNetwork],
    checkpoint_path: Optional[Path] = None,
) -> FoldResult:
    """Fine-tune on the fold's training subjects and score its test subject.

    With ``checkpoint_path`` the fine-tuned model is saved together with the
    fold's normalization statistics.

    Raises:
        ExperimentError: Wrapping any pipeline error with the run coordinates
    """
    train_subjects, test_subject = job.fold
    with run_context(
        stage="finetune",
        method=job.method.name,
        budget=str(job.budget),
        seed=job.seed,
        fold=test_subject,
    ):
        try:
            pool = [w for w in cache.select(train_subjects) if w.label is not None]
            test = [w for w in cache.select([test_subject]) if w.label is not None]
            assert_excludes(pool, [test_subject], "fine-tuning")
            stats = fit_normalization(pool)
            selected, few_shot = apply_budget(
                pool, job.budget, job.seed, cfg.evaluation.few_shot_max_k
            )
            train_cfg = cfg.finetune.model_copy(update={"seed": job.seed})
            result = finetune(
                pretrained,
                _normalized(selected, stats),
                cache.n_classes,
                train_cfg,
                cfg.encoder,
                few_shot=few_shot,
                checkpoint_path=checkpoint_path,
                metadata={
                    "normalization": stats.model_dump(),
                    "fingerprint": cfg.fingerprint(),
                    "label_map": cache.label_map,
                    "test_subject": test_subject,
                },
            )
            pred, _ = predict(result.network, _normalized(test, stats))
        except PimError as e:
            raise ExperimentError(
                f"Error in fold: {e}",
                fold=test_subject,
                seed=job.seed,
                method=job.method.name,
            ) from e
        truth = [w.label for w in test]
        fold_result = FoldResult(
            fold=test_subject,
            seed=job.seed,
            macro_f1=macro_f1(pred, truth, cache.n_classes),
            accuracy=accuracy(pred, truth),
            n_train=len(selected),
            n_test=len(test),
        )
        logger.info(
            f"macro F1 {fold_result.macro_f1:.4f}, accuracy {fold_result.accuracy:.4f}"
        )
        return fold_result


def _pretrain_all(
    cache: WindowCache,
    plan: SplitPlan,
    cfg: ExperimentConfig,
    methods: Sequence[MethodSpec],
) -> Dict[Tuple[Tasks, int], PimNetwork]:
    families = sorted(
        {m.tasks for m in methods if m.tasks is not None},
        key=lambda tasks: sorted(t.value for t in tasks),
    )
    if not families:
        return {}
    seeds = cfg.evaluation.seeds if cfg.evaluation.pretrain_per_seed else [
        cfg.evaluation.base_seed
    ]
    windows = cache.select(plan.pretrain_subjects)
    assert_excludes(windows, plan.downstream_subjects, "pre-training")
    with run_context(stage="pseudolabel"):
        _, labeled = fit_pseudo_labels(windows, cache.layout, cache.sample_rate_hz, cfg)

    networks: Dict[Tuple[Tasks, int], PimNetwork] = {}
    for tasks in families:
        for seed in seeds:
            name = "+".join(sorted(t.value for t in tasks))
            with run_context(stage="pretrain", method=f"pim:{name}", seed=seed):
                try:
                    result, _ = pretrain_encoder(
                        labeled, cache.layout, cfg, tasks, seed
                    )
                except PimError as e:
                    raise ExperimentError(
                        f"Error in pre-training: {e}", seed=seed, method=f"pim:{name}"
                    ) from e
            networks[(tasks, seed)] = result.network
    return networks


def _aggregate(
    method: MethodSpec,
    budget: Budget,
    seeds: Sequence[int],
    results: Sequence[FoldResult],
    fingerprint: str,
) -> MetricReport:
    f1_runs, acc_runs = [], []
    for seed in seeds:
        of_seed = [r for r in results if r.seed == seed]
        f1_runs.append(float(np.mean([r.macro_f1 for r in of_seed])))
        acc_runs.append(float(np.mean([r.accuracy for r in of_seed])))
    return MetricReport(
        method=method.name,
        budget=budget,
        macro_f1_runs=f1_runs,
        accuracy_runs=acc_runs,
        folds=list(results),
        fingerprint=fingerprint,
    )


def run_experiment(
    cfg: ExperimentConfig, cache: Optional[WindowCache] = None
) -> ExperimentReport:
    """Run the full protocol and report every (method, budget) cell.

    Pseudo-labels, normalization and pre-training only ever see pre-training
    subjects; every LOSO fold fine-tunes on its training subjects and is scored
    on its held-out subject, for each of ``evaluation.n_runs`` seeds.

    Args:
        cfg: Experiment configuration
        cache: Windowed corpus; built from ``cfg`` when omitted

    Returns:
        The report with one MetricReport per method and budget

    Raises:
        ExperimentError: If any stage fails, annotated with its coordinates
    """
    cache = cache if cache is not None else prepare_cache(cfg)
    evaluation = cfg.evaluation
    plan = make_split_plan(cfg.dataset, cache.subjects, evaluation.max_folds)
    methods = cfg.methods()
    fingerprint = cfg.fingerprint()
    logger.info(
        f"Experiment {cfg.name!r}: {len(methods)} methods, "
        f"{len(evaluation.budgets)} budgets, {evaluation.n_runs} seeds, "
        f"{len(plan.folds)} folds"
    )

    networks = _pretrain_all(cache, plan, cfg, methods)

    def pretrained_for(method: MethodSpec, seed: int) -> Optional[PimNetwork]:
        if method.tasks is None:
            return None
        key_seed = seed if evaluation.pretrain_per_seed else evaluation.base_seed
        return networks[(method.tasks, key_seed)]

    jobs = [
        FoldJob(method=method, budget=budget, seed=seed, fold=fold)
        for method in methods
        for budget in evaluation.budgets
        for seed in evaluation.seeds
        for fold in plan.folds
    ]
    results: List[FoldResult] = Parallel(n_jobs=cfg.n_jobs)(
        delayed(run_fold)(job, cache, cfg, pretrained_for(job.method, job.seed))
        for job in jobs
    )

    reports = []
    for method in methods:
        for budget in evaluation.budgets:
            cell = [
                r
                for job, r in zip(jobs, results)
                if job.method == method and job.budget == budget
            ]
            reports.append(
                _aggregate(method, budget, evaluation.seeds, cell, fingerprint)
            )
    return ExperimentReport(
        name=cfg.name,
        fingerprint=fingerprint,
        seeds=evaluation.seeds,
        reports=reports,
    )
