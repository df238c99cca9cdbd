"""Flat summary tables of experiment reports."""

from typing import Any, Dict, List, Sequence

import pandas as pd

from pim_har.models.reports import ExperimentReport
from pim_har.renderers.base import BaseRenderer, RendererError

COLUMNS = [
    "experiment",
    "method",
    "budget",
    "n_runs",
    "macro_f1_mean",
    "macro_f1_std",
    "accuracy_mean",
    "accuracy_std",
    "fingerprint",
]


def summary_rows(reports: Sequence[ExperimentReport]) -> List[Dict[str, Any]]:
    """One row per (experiment, method, budget) cell."""
    return [
        {
            "experiment": report.name,
            "method": cell.method,
            "budget": str(cell.budget),
            "n_runs": cell.n_runs,
            "macro_f1_mean": cell.macro_f1_mean,
            "macro_f1_std": cell.macro_f1_std,
            "accuracy_mean": cell.accuracy_mean,
            "accuracy_std": cell.accuracy_std,
            "fingerprint": report.fingerprint,
        }
        for report in reports
        for cell in report.reports
    ]


def summary_frame(reports: Sequence[ExperimentReport]) -> pd.DataFrame:
    return pd.DataFrame(summary_rows(reports), columns=COLUMNS)


class TSVRenderer(BaseRenderer[Sequence[ExperimentReport]]):
    """Renderer for the plot-ready summary table as tab-separated values."""

    def render_to_string(self, item: Sequence[ExperimentReport]) -> str:
        try:
            return str(
                summary_frame(item).to_csv(sep="\t", index=False, float_format="%.6f")
            )
        except Exception as e:
            raise RendererError(f"Error rendering summary table: {e}")
