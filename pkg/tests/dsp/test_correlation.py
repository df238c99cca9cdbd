"""Tests for cross-correlation and shift alignment."""

import numpy as np
import pytest

from pim_har.dsp.correlation import align_by_shift, best_shift, cross_correlate_full
from pim_har.errors import EmptyInputError, NoOverlapError


def test_full_lags() -> None:
    """Test the lag range and a hand-computed value."""
    lags, values = cross_correlate_full(np.array([1.0, 2.0, 3.0]), np.array([1.0, 1.0]))
    assert lags.tolist() == [-1, 0, 1, 2]
    # lag 0 pairs x1[0]·x2[0] + x1[1]·x2[1]
    assert values[1] == pytest.approx(3.0)


def test_best_shift_recovers_delay() -> None:
    """Test that a delayed copy is found at a positive lag."""
    rng = np.random.default_rng(0)
    x2 = rng.standard_normal(100)
    x1 = np.concatenate([np.zeros(7), x2[:-7]])
    assert best_shift(x1, x2) == 7
    assert best_shift(x2, x1) == -7


def test_alignment_pairs_the_correlated_samples() -> None:
    """Test that aligning at the best shift pairs identical samples."""
    rng = np.random.default_rng(1)
    x2 = rng.standard_normal(50)
    x1 = np.concatenate([np.zeros(3), x2[:-3]])
    a1, a2 = align_by_shift(x1, x2, best_shift(x1, x2))
    assert a1.size == a2.size == 47
    np.testing.assert_allclose(a1, a2)


def test_alignment_with_negative_shift() -> None:
    """Test the overlap for a negative lag."""
    a1, a2 = align_by_shift(np.arange(5), np.arange(10, 15), -2)
    assert a1.tolist() == [0, 1, 2]
    assert a2.tolist() == [12, 13, 14]


def test_no_overlap() -> None:
    """Test that a shift as long as a sequence leaves nothing to compare."""
    with pytest.raises(NoOverlapError):
        align_by_shift(np.ones(4), np.ones(6), 4)


def test_empty_input() -> None:
    """Test that empty sequences are rejected."""
    with pytest.raises(EmptyInputError):
        cross_correlate_full(np.array([]), np.ones(3))
