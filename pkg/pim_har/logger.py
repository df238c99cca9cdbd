import json
import logging
import os
import sys
from typing import Any, Dict, Optional

from rich.console import Console
from rich.logging import RichHandler

from pim_har.models.context import get_run_context

# Configure log level from environment variable
log_level = os.environ.get("PIM_LOG_LEVEL", "INFO").upper()

# Attributes every LogRecord carries; anything else came from ``extra=`` or the
# run context and is copied into JSON logs
RESERVED_ATTRS = frozenset(
    logging.LogRecord("", 0, "", 0, "", None, None).__dict__
) | {"message", "asctime", "taskName"}


class RunContextFilter(logging.Filter):
    """Attach the current run coordinates to every record."""

    def filter(self, record: logging.LogRecord) -> bool:
        for key, value in get_run_context().items():
            if not hasattr(record, key):
                setattr(record, key, value)
        return True


class JsonFormatter(logging.Formatter):
    """Custom JSON formatter with concise, relevant output."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as one JSON object with essential fields."""
        log_data: Dict[str, Any] = {
            "timestamp": self.formatTime(record, "%Y-%m-%d %H:%M:%S"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        for key, value in record.__dict__.items():
            if key not in RESERVED_ATTRS and key not in log_data:
                log_data[key] = value
        if record.exc_info:
            log_data["error"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


def setup_logging(level: Optional[str] = None, json_format: bool = False) -> None:
    """Configure logging for the library and the CLI.

    Args:
        level: Log level name; defaults to ``PIM_LOG_LEVEL`` or INFO
        json_format: Emit one JSON object per line instead of rich console output
    """
    handler: logging.Handler
    if json_format:
        handler = logging.StreamHandler(sys.stdout)
        handler.setFormatter(JsonFormatter())
    else:
        handler = RichHandler(
            console=Console(stderr=True), show_path=False, rich_tracebacks=False
        )
    handler.addFilter(RunContextFilter())

    # Configure root logger
    logging.basicConfig(
        level=getattr(logging, (level or log_level).upper()),
        handlers=[handler],
        force=True,
    )


def get_logger(name: str) -> logging.Logger:
    """Get a configured logger instance."""
    return logging.getLogger(name)


# Create application loggers
logger = get_logger("pim-har")
io_logger = get_logger("pim-har.io")
dsp_logger = get_logger("pim-har.dsp")
labels_logger = get_logger("pim-har.labels")
train_logger = get_logger("pim-har.train")
eval_logger = get_logger("pim-har.eval")
