from typing import Callable

import numpy as np

EPS = 1e-5
MAX_RELATIVE_ERROR = 1e-6


def numerical_grad(
    f: Callable[[], float], x: np.ndarray, eps: float = EPS
) -> np.ndarray:
    """Central finite differences of ``f`` with respect to ``x`` (modified in place)."""
    grad = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        i = it.multi_index
        original = x[i]
        x[i] = original + eps
        up = f()
        x[i] = original - eps
        down = f()
        x[i] = original
        grad[i] = (up - down) / (2 * eps)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Norm of the difference over the summed norms of both gradients."""
    scale = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    return float(np.linalg.norm(analytic - numeric) / max(scale, 1e-12))


def assert_grad_close(analytic: np.ndarray, numeric: np.ndarray) -> None:
    assert analytic.shape == numeric.shape
    assert relative_error(analytic, numeric) < MAX_RELATIVE_ERROR
