"""CSV ingestion of per-session sensor recordings.

Layout on disk: ``<root>/<subject_id>/<session_id>.csv``. Each header names a
channel ``<position>_<modality>_<axis>``; ``timestamp_s`` and the activity label
column are optional.
"""

from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from pim_har.errors import IngestError, MissingSensorError
from pim_har.logger import io_logger as logger
from pim_har.models.series import ChannelSpec, MultiChannelSeries

TIMESTAMP_COLUMN = "timestamp_s"
RATE_TOLERANCE = 0.01


def _check_sample_rate(
    timestamps: np.ndarray, sample_rate_hz: float, path: Path
) -> None:
    deltas = np.diff(timestamps)
    if deltas.size == 0:
        return
    observed = 1.0 / float(np.median(deltas))
    if abs(observed - sample_rate_hz) > RATE_TOLERANCE * sample_rate_hz:
        raise IngestError(
            f"{path}: timestamps imply {observed:.3f} Hz, configured "
            f"{sample_rate_hz} Hz (tolerance 1%)"
        )


def _select_sensors(
    layout: List[ChannelSpec], sensors: Optional[Sequence[str]], path: Path
) -> List[int]:
    if sensors is None:
        return list(range(len(layout)))
    present = {spec.sensor_position for spec in layout}
    missing = [s for s in sensors if s not in present]
    if missing:
        raise MissingSensorError(f"{path}: configured sensors {missing} not in layout")
    return [i for i, spec in enumerate(layout) if spec.sensor_position in sensors]


def read_series_csv(
    path: Path,
    sample_rate_hz: float,
    subject_id: str,
    session_id: str = "",
    label_column: str = "label",
    sensors: Optional[Sequence[str]] = None,
) -> MultiChannelSeries:
    """Read one session file into a series.

    Missing values (empty cells or ``NaN``) are kept as NaN; fill them with
    :func:`~pim_har.timeseries.windowing.interpolate_nan`.

    Raises:
        IngestError: If the header or cell values violate the schema, or
            timestamps disagree with ``sample_rate_hz`` by more than 1%
        MissingSensorError: If a configured sensor position has no channels
    """
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise IngestError(f"Error reading {path}: {e}") from e

    if TIMESTAMP_COLUMN in frame.columns:
        _check_sample_rate(
            frame[TIMESTAMP_COLUMN].to_numpy(dtype=np.float64), sample_rate_hz, path
        )

    labels = None
    if label_column in frame.columns:
        labels = frame[label_column].fillna(-1).to_numpy().astype(np.int64)

    channel_columns = [
        c for c in frame.columns if c not in (TIMESTAMP_COLUMN, label_column)
    ]
    try:
        layout = [ChannelSpec.from_name(c) for c in channel_columns]
        data = frame[channel_columns].apply(pd.to_numeric, errors="raise")
    except ValueError as e:
        raise IngestError(f"{path}: {e}") from e

    keep = _select_sensors(layout, sensors, path)
    try:
        return MultiChannelSeries(
            data=data.to_numpy(dtype=np.float64).T[keep],
            sample_rate_hz=sample_rate_hz,
            layout=[layout[i] for i in keep],
            subject_id=subject_id,
            session_id=session_id,
            labels=labels,
        )
    except ValueError as e:
        raise IngestError(f"{path}: {e}") from e


def load_corpus(
    root: Path,
    sample_rate_hz: float,
    label_column: str = "label",
    sensors: Optional[Sequence[str]] = None,
    subjects: Optional[Sequence[str]] = None,
) -> List[MultiChannelSeries]:
    """Read every ``<subject>/<session>.csv`` below ``root`` in sorted order.

    Raises:
        IngestError: If no session file is found or layouts differ between files
    """
    root = Path(root)
    if not root.is_dir():
        raise IngestError(f"Data directory {root} does not exist")

    series: List[MultiChannelSeries] = []
    for subject_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        if subjects is not None and subject_dir.name not in subjects:
            continue
        for path in sorted(subject_dir.glob("*.csv")):
            series.append(
                read_series_csv(
                    path,
                    sample_rate_hz,
                    subject_id=subject_dir.name,
                    session_id=path.stem,
                    label_column=label_column,
                    sensors=sensors,
                )
            )
    if not series:
        raise IngestError(f"No <subject>/<session>.csv files found below {root}")
    reference = [spec.name for spec in series[0].layout]
    for s in series[1:]:
        if [spec.name for spec in s.layout] != reference:
            raise IngestError(
                f"Channel layout of {s.subject_id}/{s.session_id} differs from "
                f"{series[0].subject_id}/{series[0].session_id}"
            )
    logger.info(
        f"Loaded {len(series)} sessions of {len({s.subject_id for s in series})} "
        f"subjects from {root}"
    )
    return series


def write_series_csv(series: MultiChannelSeries, path: Path) -> None:
    """Write a series in the ingestion schema (with timestamps and labels)."""
    frame = pd.DataFrame(
        series.data.T, columns=[spec.name for spec in series.layout]
    )
    frame.insert(0, TIMESTAMP_COLUMN, np.arange(series.n_samples) * series.dt)
    if series.labels is not None:
        frame["label"] = series.labels
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
