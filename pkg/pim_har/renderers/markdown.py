from pathlib import Path
from typing import Optional, Sequence

from jinja2 import Environment, FileSystemLoader

from pim_har.models.reports import ExperimentReport
from pim_har.renderers.base import BaseRenderer, RendererError


class MarkdownRenderer(BaseRenderer[Sequence[ExperimentReport]]):
    """Renderer for a human-readable summary using Jinja2 templates."""

    def __init__(
        self,
        template_path: Optional[Path] = None,
        template_name: str = "summary.md.j2",
    ) -> None:
        """Initialize the renderer.

        Args:
            template_path: Optional path to a custom templates directory.
                If not provided, uses the package templates.
            template_name: Name of the template file to use
        """
        self.template_path = template_path or Path(__file__).parent / "templates"
        self.template_name = template_name
        if not self.template_path.exists():
            raise RendererError(
                f"Template directory does not exist: {self.template_path}"
            )
        self.env = Environment(
            loader=FileSystemLoader(str(self.template_path)),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )

    def render_to_string(self, item: Sequence[ExperimentReport]) -> str:
        """Render the per-cell mean ± std table of every experiment.

        Raises:
            RendererError: If rendering fails
        """
        try:
            template = self.env.get_template(self.template_name)
            return template.render(reports=list(item))
        except Exception as e:
            raise RendererError(f"Error rendering summary with Jinja2: {e}")
