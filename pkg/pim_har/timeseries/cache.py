"""Windowed corpus cache: the hand-off artifact between CLI stages."""

import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from pim_har.errors import EmptyInputError, IngestError
from pim_har.logger import io_logger as logger
from pim_har.models.config import ExperimentConfig
from pim_har.models.series import ChannelSpec, MultiChannelSeries, Window

from .windowing import NO_LABEL, interpolate_nan, sliding_windows


class WindowCache(BaseModel):
    """All windows of a corpus as stacked arrays plus their provenance."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    data: np.ndarray  # [N, n_c, n_w], raw physical units
    labels: np.ndarray  # [N], NO_LABEL when unlabeled
    subject_ids: np.ndarray
    session_ids: np.ndarray
    window_index: np.ndarray
    layout: List[ChannelSpec]
    sample_rate_hz: float
    label_map: Dict[str, int] = {}
    fingerprint: str = ""

    @model_validator(mode="after")
    def validate_shapes(self) -> "WindowCache":
        """Validate that every per-window array has one entry per window."""
        n = self.data.shape[0]
        for name in ("labels", "subject_ids", "session_ids", "window_index"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} must have one entry per window")
        if self.data.ndim != 3 or self.data.shape[1] != len(self.layout):
            raise ValueError("data must be [N, n_channels, n_w] matching the layout")
        return self

    @property
    def n_windows(self) -> int:
        return int(self.data.shape[0])

    @property
    def n_classes(self) -> int:
        return len(self.label_map)

    @property
    def subjects(self) -> List[str]:
        """Distinct subject ids in sorted order."""
        return sorted(set(self.subject_ids.tolist()))

    def select(self, subjects: Sequence[str]) -> List[Window]:
        """Windows belonging to ``subjects``, in cache order."""
        mask = np.isin(self.subject_ids, list(subjects))
        return [self._window(i) for i in np.flatnonzero(mask)]

    def to_windows(self) -> List[Window]:
        return [self._window(i) for i in range(self.n_windows)]

    def _window(self, i: int) -> Window:
        label = int(self.labels[i])
        return Window(
            data=self.data[i],
            label=None if label == NO_LABEL else label,
            subject_id=str(self.subject_ids[i]),
            session_id=str(self.session_ids[i]),
            window_index=int(self.window_index[i]),
        )

    @classmethod
    def from_windows(
        cls,
        windows: Sequence[Window],
        layout: List[ChannelSpec],
        sample_rate_hz: float,
        label_map: Optional[Dict[str, int]] = None,
        fingerprint: str = "",
    ) -> "WindowCache":
        """Stack windows into a cache.

        Raises:
            EmptyInputError: If no windows are given
        """
        if not windows:
            raise EmptyInputError("cannot build a cache from zero windows")
        return cls(
            data=np.stack([w.data for w in windows]),
            labels=np.array(
                [NO_LABEL if w.label is None else w.label for w in windows],
                dtype=np.int64,
            ),
            subject_ids=np.array([w.subject_id for w in windows]),
            session_ids=np.array([w.session_id for w in windows]),
            window_index=np.array([w.window_index for w in windows], dtype=np.int64),
            layout=layout,
            sample_rate_hz=sample_rate_hz,
            label_map=label_map or {},
            fingerprint=fingerprint,
        )


def build_cache(
    series: Sequence[MultiChannelSeries], cfg: ExperimentConfig
) -> WindowCache:
    """Fill gaps, window every series and re-index activity labels.

    Windows whose majority label is in ``dataset.ignore_labels`` are dropped;
    remaining label ids are mapped to ``0..n_classes-1`` in sorted order.

    Raises:
        EmptyInputError: If no series or no windows remain
    """
    if not series:
        raise EmptyInputError("no series to window")
    sample_rate_hz = series[0].sample_rate_hz
    window_len, step = cfg.windowing.resolve(sample_rate_hz)
    ignored = set(cfg.dataset.ignore_labels)

    windows: List[Window] = []
    for s in series:
        for w in sliding_windows(interpolate_nan(s), window_len, step):
            if w.label is not None and w.label in ignored:
                continue
            windows.append(w)

    originals = sorted({w.label for w in windows if w.label is not None})
    label_map = {str(label): i for i, label in enumerate(originals)}
    windows = [
        w.model_copy(update={"label": label_map[str(w.label)]})
        if w.label is not None
        else w
        for w in windows
    ]
    logger.info(
        f"Windowed {len(series)} series into {len(windows)} windows of "
        f"{window_len} samples (step {step}), {len(label_map)} classes"
    )
    return WindowCache.from_windows(
        windows,
        layout=list(series[0].layout),
        sample_rate_hz=sample_rate_hz,
        label_map=label_map,
        fingerprint=cfg.fingerprint(),
    )


def save_cache(cache: WindowCache, path: Path) -> None:
    """Write the cache as an uncompressed ``.npz`` archive."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez(
        path,
        data=cache.data,
        label=cache.labels,
        subject_id=cache.subject_ids,
        session_id=cache.session_ids,
        window_index=cache.window_index,
        layout=np.array(
            json.dumps([spec.model_dump(mode="json") for spec in cache.layout])
        ),
        sample_rate_hz=np.array(cache.sample_rate_hz),
        label_map=np.array(json.dumps(cache.label_map)),
        fingerprint=np.array(cache.fingerprint),
    )


def load_cache(path: Path) -> WindowCache:
    """Read a cache written by :func:`save_cache`.

    Raises:
        IngestError: If the archive is missing or incomplete
    """
    try:
        with np.load(path, allow_pickle=False) as archive:
            return WindowCache(
                data=archive["data"],
                labels=archive["label"],
                subject_ids=archive["subject_id"],
                session_ids=archive["session_id"],
                window_index=archive["window_index"],
                layout=[
                    ChannelSpec.model_validate(spec)
                    for spec in json.loads(str(archive["layout"]))
                ],
                sample_rate_hz=float(archive["sample_rate_hz"]),
                label_map=json.loads(str(archive["label_map"])),
                fingerprint=str(archive["fingerprint"]),
            )
    except (OSError, KeyError, ValueError) as e:
        raise IngestError(f"Error loading window cache {path}: {e}") from e
