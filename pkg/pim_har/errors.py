"""Exception hierarchy shared by every pim_har module."""

from typing import Optional


class PimError(Exception):
    """Base exception for all pim_har failures."""

    pass


class AllNaNChannelError(PimError, ValueError):
    """A channel has fewer than two valid samples to interpolate from."""

    pass


class SeriesTooShortError(PimError, ValueError):
    """A series is shorter than the requested window length."""

    pass


class EmptyInputError(PimError, ValueError):
    """An operation received an empty collection or sequence."""

    pass


class ShapeMismatchError(PimError, ValueError):
    """Array or tensor shapes are inconsistent with each other."""

    pass


class InvalidCutoffError(PimError, ValueError):
    """A filter cutoff lies outside (0, Nyquist)."""

    pass


class SeriesTooShortForFilterError(PimError, ValueError):
    """A series is too short for the edge padding of zero-phase filtering."""

    pass


class NoOverlapError(PimError, ValueError):
    """Two shifted sequences have no overlapping samples."""

    pass


class BandTooNarrowError(PimError, ValueError):
    """A Sakoe-Chiba band cannot reach the terminal DTW cell."""

    pass


class DegenerateGravityError(PimError, ValueError):
    """The estimated gravity vector vanishes at some timestep."""

    pass


class DegenerateRangeError(PimError, ValueError):
    """Values used to fit a uniform discretizer have zero range."""

    pass


class MissingSensorError(PimError, KeyError):
    """A configured sensor position is absent from the channel layout."""

    pass


class InvalidSegmentsError(PimError, ValueError):
    """A segment count is invalid for permutation augmentation."""

    pass


class IndexOutOfRangeError(PimError, IndexError):
    """A class id lies outside the logits' class axis."""

    pass


class NoSensorsError(PimError, ValueError):
    """A layout exposes no accelerometer sensor to build heads for."""

    pass


class NoPseudoLabelsError(PimError, ValueError):
    """Pre-training received windows without pseudo-labels."""

    pass


class LengthMismatchError(PimError, ValueError):
    """Prediction and ground-truth sequences differ in length."""

    pass


class TooFewSubjectsError(PimError, ValueError):
    """Cross-validation needs at least two subjects."""

    pass


class IngestError(PimError):
    """CSV input violates the documented schema."""

    pass


class CheckpointError(PimError):
    """A checkpoint container is corrupt or incompatible."""

    pass


class ConfigError(PimError, ValueError):
    """An experiment configuration file is invalid."""

    pass


class ExperimentError(PimError):
    """A failure inside an experiment, annotated with its fold and seed."""

    def __init__(
        self,
        message: str,
        fold: Optional[str] = None,
        seed: Optional[int] = None,
        method: Optional[str] = None,
    ) -> None:
        """Initialize the error with its experiment coordinates.

        Args:
            message: Description of the failure
            fold: Held-out subject of the failing fold, if any
            seed: Seed of the failing run, if any
            method: Method name of the failing run, if any
        """
        self.fold = fold
        self.seed = seed
        self.method = method
        parts = [
            f"{key}={value}"
            for key, value in (("method", method), ("fold", fold), ("seed", seed))
            if value is not None
        ]
        suffix = f" [{', '.join(parts)}]" if parts else ""
        super().__init__(f"{message}{suffix}")
