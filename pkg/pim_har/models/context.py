"""Context management for experiment runs."""

from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Dict, Iterator

# Thread-safe context variable
current_run: ContextVar[Dict[str, Any]] = ContextVar("current_run", default={})


@contextmanager
def run_context(**fields: Any) -> Iterator[None]:
    """Context manager for tagging work with its experiment coordinates.

    Fields are merged over any enclosing context, so nested blocks can add
    ``fold`` inside a ``method`` block, and so on.

    Args:
        **fields: Coordinates such as ``stage``, ``method``, ``fold`` or ``seed``

    Yields:
        None

    Example:
        ```python
        with run_context(method="pim", seed=3):
            with run_context(fold="105"):
                model, history = finetune(...)
        ```
    """
    merged = {**current_run.get(), **fields}
    token = current_run.set(merged)
    try:
        yield
    finally:
        current_run.reset(token)


def get_run_context() -> Dict[str, Any]:
    """Get a copy of the current run coordinates.

    Returns:
        The coordinates set by the enclosing ``run_context`` blocks, or an
        empty dict outside of any run
    """
    return dict(current_run.get())
