"""Per-window SAM feature extraction and pseudo-label assignment."""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from pim_har.errors import MissingSensorError
from pim_har.logger import labels_logger as logger
from pim_har.models.config import ExperimentConfig, LimbPair, SamTask
from pim_har.models.constants import ANGLE_AXES
from pim_har.models.labels import DiscretizerSet, PseudoLabelSet, WindowFeatures
from pim_har.models.series import ChannelSpec, Modality, Window, channel_indices
from pim_har.models.series import sensor_positions as accel_positions

from .angles import angle_feature, angles_from_ahrs, angles_from_gravity
from .discretizers import discretize, fit_discretizers
from .motion import gravity_estimate, speed_of_motion
from .symmetry import symmetry_feature

ARM_PARTS = ("arm", "forearm", "wrist", "hand")
LEG_PARTS = ("leg", "thigh", "shin", "ankle", "foot")


def _limb_group(part: str) -> str:
    if part in ARM_PARTS:
        return "arms"
    if part in LEG_PARTS:
        return "legs"
    return part


def sensor_positions(
    layout: Sequence[ChannelSpec], configured: Optional[Sequence[str]] = None
) -> List[str]:
    """Accelerometer positions used for pseudo-labels.

    Raises:
        MissingSensorError: If a configured position lacks a full accel triple
    """
    available = accel_positions(layout, Modality.ACCEL)
    if configured is None:
        return available
    missing = [p for p in configured if p not in available]
    if missing:
        raise MissingSensorError(f"layout has no accelerometer triple for {missing}")
    return list(configured)


def limb_pairs(
    positions: Sequence[str], configured: Optional[Sequence[LimbPair]] = None
) -> List[LimbPair]:
    """Left/right limb pairs: configured ones, or derived from position names.

    ``left_<part>``/``right_<part>`` positions pair up; arm-like parts are named
    ``arms`` and leg-like parts ``legs``.

    Raises:
        MissingSensorError: If a configured pair references an unused position
    """
    if configured is not None:
        for pair in configured:
            for position in (pair.left, pair.right):
                if position not in positions:
                    raise MissingSensorError(
                        f"limb pair {pair.name!r} references "
                        f"missing sensor {position!r}"
                    )
        return list(configured)

    pairs: List[LimbPair] = []
    for position in positions:
        if not position.startswith("left_"):
            continue
        part = position[len("left_") :]
        if f"right_{part}" not in positions:
            continue
        name = _limb_group(part)
        if any(p.name == name for p in pairs):
            name = part
        pairs.append(LimbPair(name=name, left=position, right=f"right_{part}"))
    return pairs


class FeatureExtractor:
    """Computes the raw SAM features of windows with a fixed layout."""

    def __init__(
        self,
        layout: Sequence[ChannelSpec],
        sample_rate_hz: float,
        cfg: ExperimentConfig,
        tasks: Optional[Sequence[SamTask]] = None,
    ) -> None:
        """Resolve sensors and pairs once for the whole corpus.

        Args:
            layout: Channel layout shared by every window
            sample_rate_hz: Sampling rate of the windows
            cfg: Experiment configuration (filters, AHRS and pair settings)
            tasks: Families to compute; defaults to ``cfg.pseudo_labels.tasks``

        Raises:
            MissingSensorError: If a configured sensor or pair is absent
        """
        self.layout = list(layout)
        self.sample_rate_hz = sample_rate_hz
        self.cfg = cfg
        self.tasks = list(tasks if tasks is not None else cfg.pseudo_labels.tasks)
        self.positions = sensor_positions(layout, cfg.dataset.sensors)
        self.pairs = limb_pairs(self.positions, cfg.dataset.pairs)
        if SamTask.SYMMETRY in self.tasks and not self.pairs:
            logger.warning("No left/right limb pair in the layout; symmetry skipped")

    def _triple(
        self, data: np.ndarray, position: str, modality: Modality
    ) -> Optional[np.ndarray]:
        idx = channel_indices(self.layout, position, modality)
        return None if idx is None else data[idx]

    def _accel(self, data: np.ndarray, position: str) -> np.ndarray:
        accel = self._triple(data, position, Modality.ACCEL)
        if accel is None:
            raise MissingSensorError(f"no accelerometer triple for {position!r}")
        return accel

    def _angles(self, data: np.ndarray, position: str) -> np.ndarray:
        filters = self.cfg.filters
        accel = self._accel(data, position)
        gyro = self._triple(data, position, Modality.GYRO)
        if gyro is not None and self.cfg.pseudo_labels.use_ahrs:
            return angles_from_ahrs(
                accel,
                gyro,
                self._triple(data, position, Modality.MAG),
                self.sample_rate_hz,
                self.cfg.pseudo_labels.madgwick_beta,
            )
        gravity = gravity_estimate(
            accel, self.sample_rate_hz, filters.cutoff_hz, filters.order
        )
        return angles_from_gravity(gravity)

    def features(self, data: np.ndarray) -> WindowFeatures:
        """Raw speed, angle and symmetry features of one ``[n_c, n_w]`` window."""
        filters = self.cfg.filters
        result = WindowFeatures()
        for position in self.positions:
            accel = self._accel(data, position)
            if SamTask.MOTION in self.tasks:
                result.speed[position] = speed_of_motion(
                    accel,
                    self.sample_rate_hz,
                    position,
                    filters.cutoff_hz,
                    filters.order,
                ).delta_d
            if SamTask.ANGLE in self.tasks:
                result.angle[position] = angle_feature(
                    self._angles(data, position), position
                ).delta_r
        if SamTask.SYMMETRY in self.tasks:
            for pair in self.pairs:
                result.symmetry[pair.name] = symmetry_feature(
                    self._accel(data, pair.left),
                    self._accel(data, pair.right),
                    self.sample_rate_hz,
                    band=self.cfg.pseudo_labels.dtw_band,
                    pair=pair.name,
                    cutoff_hz=filters.cutoff_hz,
                    order=filters.order,
                ).delta_d_symmetry
        return result

    def compute(
        self, windows: Sequence[Window], n_jobs: int = 1
    ) -> List[WindowFeatures]:
        """Features of every window, in input order regardless of ``n_jobs``.

        Activity labels are never read.
        """
        logger.info(f"Computing SAM features for {len(windows)} windows")
        if n_jobs == 1:
            return [self.features(w.data) for w in windows]
        return Parallel(n_jobs=n_jobs)(delayed(self.features)(w.data) for w in windows)


def label_features(
    features: WindowFeatures, discretizers: DiscretizerSet
) -> PseudoLabelSet:
    """Discretize the raw features of one window."""
    angle_bins = {}
    for position, delta_r in features.angle.items():
        bins = [
            discretize(discretizers.get(f"angle:{position}:{axis}"), value)
            for axis, value in zip(ANGLE_AXES, delta_r)
        ]
        angle_bins[position] = (bins[0], bins[1], bins[2])
    return PseudoLabelSet(
        speed_bins={
            position: discretize(discretizers.get(f"speed:{position}"), value)
            for position, value in features.speed.items()
        },
        angle_bins=angle_bins,
        symmetry_bins={
            pair: discretize(discretizers.get(f"symmetry:{pair}"), value)
            for pair, value in features.symmetry.items()
        },
    )


def fit_pseudo_labels(
    windows: Sequence[Window],
    layout: Sequence[ChannelSpec],
    sample_rate_hz: float,
    cfg: ExperimentConfig,
) -> Tuple[DiscretizerSet, List[Window]]:
    """Fit discretizers on ``windows`` and attach their pseudo-labels.

    ``windows`` must be the raw-unit pre-training corpus.
    """
    extractor = FeatureExtractor(layout, sample_rate_hz, cfg)
    features = extractor.compute(windows, cfg.n_jobs)
    discretizers = fit_discretizers(
        features, extractor.tasks, cfg.pseudo_labels.angle_binning
    )
    discretizers = discretizers.model_copy(update={"fingerprint": cfg.fingerprint()})
    labeled = [
        w.model_copy(update={"pseudo": label_features(f, discretizers)})
        for w, f in zip(windows, features)
    ]
    return discretizers, labeled


def build_pseudo_labels(
    windows: Sequence[Window],
    layout: Sequence[ChannelSpec],
    discretizers: DiscretizerSet,
    sample_rate_hz: float,
    cfg: ExperimentConfig,
) -> List[Window]:
    """Attach pseudo-labels computed with already fitted ``discretizers``.

    Raises:
        MissingSensorError: If the layout lacks a configured position
        KeyError: If a feature has no fitted discretizer
    """
    extractor = FeatureExtractor(layout, sample_rate_hz, cfg)
    features = extractor.compute(windows, cfg.n_jobs)
    return [
        w.model_copy(update={"pseudo": label_features(f, discretizers)})
        for w, f in zip(windows, features)
    ]
