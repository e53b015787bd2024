# stc_ris/logging.py
"""Logging configuration and utilities for the stc-ris toolkit.

Structured logging with context tracking: every logger obtained through
``get_logger`` is a ``StructuredLogAdapter`` that merges its context
(component, operation, trace id) into each record, and ``JsonFormatter``
renders records as one JSON object per line when ``LOG_FORMAT=json``.
"""

import json
import logging
import sys
import uuid
from collections.abc import MutableMapping
from datetime import datetime
from logging.handlers import RotatingFileHandler
from typing import Any

from .config import LogLevel, get_config

logger = logging.getLogger("stc_ris")

# Log rotation settings
MAX_LOG_SIZE = 10 * 1024 * 1024  # 10 MB
BACKUP_COUNT = 5

_LOG_LEVEL_MAP = {
    LogLevel.DEBUG: logging.DEBUG,
    LogLevel.INFO: logging.INFO,
    LogLevel.WARNING: logging.WARNING,
    LogLevel.ERROR: logging.ERROR,
}

_STANDARD_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Attributes every LogRecord carries; everything else came in through `extra`.
_RESERVED_ATTRS = frozenset(
    (
        "args",
        "exc_info",
        "exc_text",
        "stack_info",
        "lineno",
        "funcName",
        "created",
        "msecs",
        "relativeCreated",
        "levelname",
        "levelno",
        "pathname",
        "filename",
        "module",
        "name",
        "thread",
        "threadName",
        "processName",
        "process",
        "message",
        "msg",
        "taskName",
    )
)


def initialize_logging() -> None:
    """Initialize the logging system based on configuration.

    Safe to call more than once: existing handlers are replaced.
    """
    config = get_config()
    log_level = _LOG_LEVEL_MAP[config.log_level]
    logger.setLevel(log_level)
    logger.propagate = False

    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    # Diagnostics always go to stderr; stdout is reserved for summaries.
    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setLevel(logging.DEBUG)
    stderr_handler.setFormatter(_make_formatter(config.log_format))
    logger.addHandler(stderr_handler)

    if config.log_to_file:
        file_handler = RotatingFileHandler(
            config.log_file, maxBytes=MAX_LOG_SIZE, backupCount=BACKUP_COUNT
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(_make_formatter(config.log_format))
        logger.addHandler(file_handler)

    logger.debug(
        f"Logging initialized at {config.log_level.value} "
        f"(format={config.log_format}, file={config.log_to_file})"
    )


def _make_formatter(log_format: str) -> logging.Formatter:
    if log_format == "json":
        return JsonFormatter()
    return logging.Formatter(_STANDARD_FORMAT)


class JsonFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        """Format the log record as a JSON string."""
        log_entry: dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "message": record.getMessage(),
            "logger": record.name,
        }

        if record.exc_info and record.exc_info[0] is not None:
            log_entry["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": self.formatException(record.exc_info),
            }

        for key, value in record.__dict__.items():
            if key not in _RESERVED_ATTRS:
                log_entry[key] = value

        return json.dumps(log_entry, default=str)


class StructuredLogAdapter(logging.LoggerAdapter):
    """Adapter for structured logging with context."""

    trace_id: str | None

    def __init__(
        self, logger: logging.Logger, extra: dict[str, Any] | None = None
    ) -> None:
        """Initialize with a logger and extra context."""
        self.trace_id = None
        super().__init__(logger, dict(extra or {}))

    def process(
        self, msg: Any, kwargs: MutableMapping[str, Any]
    ) -> tuple[Any, MutableMapping[str, Any]]:
        """Merge the adapter context into the record's ``extra``."""
        merged: dict[str, Any] = dict(self.extra or {})
        if self.trace_id and "trace_id" not in merged:
            merged["trace_id"] = self.trace_id
        call_extra = kwargs.get("extra")
        if isinstance(call_extra, dict):
            merged.update(call_extra)
        kwargs["extra"] = merged
        return msg, kwargs

    def with_context(self, **context: Any) -> "StructuredLogAdapter":
        """Create a new logger with additional context."""
        new_extra = dict(self.extra or {})
        new_extra.update(context)
        adapter = StructuredLogAdapter(self.logger, new_extra)
        adapter.trace_id = self.trace_id
        return adapter

    def trace(self, trace_id: str | None = None) -> "StructuredLogAdapter":
        """Add trace ID to logger context."""
        self.trace_id = trace_id or str(uuid.uuid4())
        return self


def get_logger(name: str, **extra: Any) -> StructuredLogAdapter:
    """Get a logger with the given name and context.

    Args:
        name: Logger name (will be prefixed with stc_ris)
        **extra: Additional context to include in all log messages

    Returns:
        A structured logger adapter
    """
    if not name.startswith("stc_ris.") and name != "stc_ris":
        name = f"stc_ris.{name}"

    return StructuredLogAdapter(logging.getLogger(name), extra)


def get_run_logger(command: str, **context: Any) -> StructuredLogAdapter:
    """Get a logger for one CLI command run, tagged with a fresh trace ID."""
    return get_logger("run", command=command, **context).trace()
