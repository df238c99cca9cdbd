"""``pim-har`` command line interface."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from rich.console import Console
from rich.table import Table

from pim_har.core.application import PimApplication, parse_budget, report
from pim_har.errors import PimError
from pim_har.logger import logger, setup_logging
from pim_har.models.config import ExperimentConfig
from pim_har.models.reports import ExperimentReport
from pim_har.renderers.table import summary_rows

EXIT_PIM_ERROR = 2

console = Console()


def _add_config(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument(
        "--config", type=Path, required=required, help="Experiment YAML/JSON file"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pim-har",
        description="Physical-information pre-training for human activity recognition",
    )
    parser.add_argument(
        "--log-level", default=None, help="Logging level (default: $PIM_LOG_LEVEL)"
    )
    parser.add_argument(
        "--log-json", action="store_true", help="Emit one JSON object per log record"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="Write the synthetic CSV corpus")
    _add_config(synth)
    synth.add_argument("--out", type=Path, required=True)

    ingest = sub.add_parser("ingest", help="Window a CSV corpus into a cache")
    _add_config(ingest)
    ingest.add_argument("--data-dir", type=Path, default=None)
    ingest.add_argument("--out", type=Path, required=True)

    pseudolabel = sub.add_parser("pseudolabel", help="Compute SAM pseudo-labels")
    _add_config(pseudolabel)
    pseudolabel.add_argument("--cache", type=Path, required=True)
    pseudolabel.add_argument("--out-dir", type=Path, required=True)

    pretrain = sub.add_parser("pretrain", help="Pre-train the encoder")
    _add_config(pretrain)
    pretrain.add_argument("--cache", type=Path, required=True)
    pretrain.add_argument("--labels-dir", type=Path, required=True)
    pretrain.add_argument("--out", type=Path, required=True)
    pretrain.add_argument(
        "--tasks", default=None, help="SAM families, e.g. angle+motion"
    )

    finetune = sub.add_parser("finetune", help="Fine-tune one LOSO fold")
    _add_config(finetune)
    finetune.add_argument("--cache", type=Path, required=True)
    finetune.add_argument("--checkpoint", type=Path, default=None)
    finetune.add_argument("--test-subject", required=True)
    finetune.add_argument("--seed", type=int, default=0)
    finetune.add_argument("--budget", type=parse_budget, default="all")
    finetune.add_argument("--out", type=Path, required=True)

    evaluate = sub.add_parser("evaluate", help="Run the full evaluation protocol")
    _add_config(evaluate)
    evaluate.add_argument(
        "--cache", type=Path, default=None, help="Windowed corpus (built if omitted)"
    )
    evaluate.add_argument("--out", type=Path, required=True)

    summary = sub.add_parser("report", help="Aggregate metric files")
    summary.add_argument("--runs", type=Path, nargs="+", required=True)
    summary.add_argument("--out-dir", type=Path, required=True)
    return parser


def print_summary(reports: Sequence[ExperimentReport]) -> None:
    """Show mean ± std of every metric cell as a rich table."""
    table = Table(title="Evaluation summary")
    for column in ("Experiment", "Method", "Budget", "Runs", "Macro F1", "Accuracy"):
        table.add_column(column)
    for row in summary_rows(reports):
        table.add_row(
            row["experiment"],
            row["method"],
            row["budget"],
            str(row["n_runs"]),
            f"{row['macro_f1_mean']:.4f} ± {row['macro_f1_std']:.4f}",
            f"{row['accuracy_mean']:.4f} ± {row['accuracy_std']:.4f}",
        )
    console.print(table)


def run(args: argparse.Namespace) -> None:
    """Dispatch a parsed command line."""
    if args.command == "report":
        print_summary(report(args.runs, args.out_dir))
        return

    app = PimApplication(ExperimentConfig.from_file(args.config))
    if args.command == "synth":
        n = app.synth(args.out)
        console.print(f"Wrote {n} synthetic sessions to {args.out}")
    elif args.command == "ingest":
        n = app.ingest(args.data_dir, args.out)
        console.print(f"Cached {n} windows in {args.out}")
    elif args.command == "pseudolabel":
        discretizers = app.pseudolabel(args.cache, args.out_dir)
        console.print(
            f"Fitted {len(discretizers.discretizers)} discretizers into {args.out_dir}"
        )
    elif args.command == "pretrain":
        best = app.pretrain(args.cache, args.labels_dir, args.out, args.tasks)
        console.print(f"Saved {args.out} (best epoch {best})")
    elif args.command == "finetune":
        result = app.finetune(
            args.cache,
            args.checkpoint,
            args.test_subject,
            args.seed,
            args.budget,
            args.out,
        )
        console.print(
            f"Fold {result.fold}: macro F1 {result.macro_f1:.4f}, "
            f"accuracy {result.accuracy:.4f}"
        )
    elif args.command == "evaluate":
        print_summary([app.evaluate(args.cache, args.out)])


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the ``pim-har`` console script.

    Returns:
        0 on success, 2 when the pipeline raised a PimError
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_json)
    try:
        run(args)
    except PimError as e:
        logger.error(str(e))
        return EXIT_PIM_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
