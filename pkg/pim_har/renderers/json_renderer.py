"""JSON renderer relying on Pydantic's native serialization."""

from pathlib import Path
from typing import Generic, List, Sequence, Type, TypeVar

from pydantic import BaseModel, TypeAdapter

from pim_har.renderers.base import BaseRenderer, RendererError

ModelT = TypeVar("ModelT", bound=BaseModel)


class JSONRenderer(BaseRenderer[ModelT], Generic[ModelT]):
    """Renderer for any Pydantic artifact (reports, discretizers, plans) as JSON."""

    def __init__(self, model: Type[ModelT]) -> None:
        """Initialize the renderer for one model class.

        Args:
            model: Pydantic model class used when loading
        """
        self.model = model

    def render_to_string(self, item: ModelT) -> str:
        """Render the artifact to a JSON string.

        Raises:
            RendererError: If serialization fails
        """
        try:
            return item.model_dump_json(indent=2)
        except Exception as e:
            raise RendererError(f"Error rendering {self.model.__name__} to JSON: {e}")

    def load_from_string(self, content: str) -> ModelT:
        """Load the artifact from a JSON string.

        Raises:
            RendererError: If parsing or validation fails
        """
        try:
            return self.model.model_validate_json(content)
        except Exception as e:
            raise RendererError(f"Error loading {self.model.__name__} from JSON: {e}")

    def load_from_file(self, file_path: Path) -> ModelT:
        """Load the artifact from a JSON file.

        Raises:
            RendererError: If reading, parsing or validation fails
        """
        try:
            content = Path(file_path).read_text(encoding="utf-8")
        except OSError as e:
            raise RendererError(f"Error reading {file_path}: {e}")
        return self.load_from_string(content)


class JSONListRenderer(BaseRenderer[Sequence[ModelT]], Generic[ModelT]):
    """Renderer for a JSON array of Pydantic artifacts."""

    def __init__(self, model: Type[ModelT]) -> None:
        self.model = model
        self.adapter = TypeAdapter(List[model])  # type: ignore[valid-type]

    def render_to_string(self, item: Sequence[ModelT]) -> str:
        try:
            return self.adapter.dump_json(list(item), indent=2).decode("utf-8")
        except Exception as e:
            raise RendererError(f"Error rendering {self.model.__name__} list: {e}")
