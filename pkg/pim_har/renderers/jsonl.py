"""JSON Lines writers for pseudo-labels and training histories."""

import json
from typing import Any, Dict, List, Sequence

from pim_har.models.reports import EpochRecord
from pim_har.models.series import Window
from pim_har.renderers.base import BaseRenderer, RendererError


def pseudo_label_record(w: Window, fingerprint: str = "") -> Dict[str, Any]:
    """One JSONL record: window provenance plus its SAM bins."""
    if w.pseudo is None:
        raise RendererError(
            f"window {w.window_index} of {w.subject_id} has no pseudo-labels"
        )
    return {
        "subject_id": w.subject_id,
        "session_id": w.session_id,
        "window_index": w.window_index,
        "speed": w.pseudo.speed_bins,
        "angle": {p: list(bins) for p, bins in w.pseudo.angle_bins.items()},
        "symmetry": w.pseudo.symmetry_bins,
        "fingerprint": fingerprint,
    }


class PseudoLabelRenderer(BaseRenderer[Sequence[Window]]):
    """Renderer for the pseudo-labels of a corpus, one window per line."""

    def __init__(self, fingerprint: str = "") -> None:
        self.fingerprint = fingerprint

    def render_to_string(self, item: Sequence[Window]) -> str:
        lines = [
            json.dumps(pseudo_label_record(w, self.fingerprint), sort_keys=True)
            for w in item
        ]
        return "".join(f"{line}\n" for line in lines)


class HistoryRenderer(BaseRenderer[Sequence[EpochRecord]]):
    """Renderer for a training curve: ``{epoch, train_loss, val_loss, per_term}``."""

    def render_to_string(self, item: Sequence[EpochRecord]) -> str:
        try:
            return "".join(f"{record.model_dump_json()}\n" for record in item)
        except Exception as e:
            raise RendererError(f"Error rendering training history: {e}")

    def load_from_string(self, content: str) -> List[EpochRecord]:
        """Parse a rendered history.

        Raises:
            RendererError: If a line is not a valid epoch record
        """
        try:
            return [
                EpochRecord.model_validate_json(line)
                for line in content.splitlines()
                if line.strip()
            ]
        except Exception as e:
            raise RendererError(f"Error loading training history: {e}")
