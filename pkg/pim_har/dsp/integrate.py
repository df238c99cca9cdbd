import numpy as np


def cumulative_integrate(
    x: np.ndarray, dt: float, initial: float = 0.0, lagged: bool = False
) -> np.ndarray:
    """Rectangle-rule running integral along the last axis.

    ``y[0] = initial`` and ``y[k+1] = y[k] + x[k+1]·dt``. With ``lagged=True`` the
    recurrence uses the previous sample instead, ``y[k+1] = y[k] + x[k]·dt``, which
    is how positions are integrated from velocities.

    Raises:
        ValueError: If ``dt`` is not positive
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] == 0:
        return x.copy()
    increments = x[..., :-1] if lagged else x[..., 1:]
    steps = np.cumsum(increments * dt, axis=-1)
    y = np.empty_like(x)
    y[..., 0] = initial
    y[..., 1:] = initial + steps
    return y
