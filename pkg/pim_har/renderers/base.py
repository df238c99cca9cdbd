from abc import ABC, abstractmethod
from pathlib import Path
from typing import Generic, TypeVar

from pim_har.errors import PimError

T = TypeVar("T")


class RendererError(PimError):
    """Base exception for rendering operations."""

    pass


class BaseRenderer(ABC, Generic[T]):
    """Base class for artifact renderers."""

    @abstractmethod
    def render_to_string(self, item: T) -> str:
        """Render an artifact to its text representation.

        Args:
            item: Artifact to render

        Returns:
            String representation of the artifact in the target format

        Raises:
            RendererError: If rendering fails
        """
        pass

    def render_to_file(self, item: T, file_path: Path) -> None:
        """Render an artifact to a file, creating parent directories.

        Args:
            item: Artifact to render
            file_path: Path where to save the rendered artifact

        Raises:
            RendererError: If rendering or saving fails
        """
        content = self.render_to_string(item)
        try:
            file_path = Path(file_path)
            file_path.parent.mkdir(parents=True, exist_ok=True)
            file_path.write_text(content, encoding="utf-8")
        except OSError as e:
            raise RendererError(f"Error saving {file_path}: {e}")
