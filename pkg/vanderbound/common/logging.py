"""Logging for vanderbound: one format, stderr console, optional rotating file.

Records carry three context fields (stage, run_id, instance) bound through
`get_logger(...).bind(...)`; unbound fields print as "-". Stdout is left to
reports.
"""

from __future__ import annotations

import logging
import logging.config
from pathlib import Path
from typing import Any, Dict, Optional

CONTEXT_FIELDS = ("stage", "run_id", "instance")
UNBOUND = "-"

LOG_FORMAT = "%(asctime)s | %(levelname)s | " + " | ".join(f"%({key})s" for key in CONTEXT_FIELDS) + " | %(message)s"
LOG_FILENAME = "vanderbound.log"
LOG_MAX_BYTES = 5 * 1024 * 1024
LOG_BACKUPS = 5

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class _ContextFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        for key in CONTEXT_FIELDS:
            if not hasattr(record, key):
                setattr(record, key, UNBOUND)
        return True


class ContextLoggerAdapter(logging.LoggerAdapter):
    """LoggerAdapter whose `.bind()` returns a child with extra context."""

    def bind(self, **context: str) -> "ContextLoggerAdapter":
        return ContextLoggerAdapter(self.logger, {**self.extra, **context})

    def process(self, msg, kwargs):
        kwargs["extra"] = {**self.extra, **kwargs.get("extra", {})}
        return msg, kwargs


def normalize_level(level: str) -> str:
    name = str(level).upper()
    if name not in LEVELS:
        raise ValueError(f"Unknown log level {level!r}; expected one of {', '.join(LEVELS)}")
    return name


def _console_handler(level: str) -> Dict[str, Any]:
    return {
        "class": "logging.StreamHandler",
        "level": level,
        "formatter": "default",
        "filters": ["context"],
        "stream": "ext://sys.stderr",
    }


def _file_handler(log_dir: Path, level: str) -> Dict[str, Any]:
    log_dir.mkdir(parents=True, exist_ok=True)
    return {
        "class": "logging.handlers.RotatingFileHandler",
        "level": level,
        "formatter": "default",
        "filters": ["context"],
        "filename": str(log_dir / LOG_FILENAME),
        "maxBytes": LOG_MAX_BYTES,
        "backupCount": LOG_BACKUPS,
        "encoding": "utf-8",
    }


def setup_logging(log_dir: Optional[Path] = None, *, level: str = "INFO", console: bool = True) -> None:
    """Configure the root logger; `log_dir` adds `vanderbound.log` with rotation."""

    level = normalize_level(level)
    handlers: Dict[str, Dict[str, Any]] = {}
    if log_dir is not None:
        handlers["file"] = _file_handler(Path(log_dir), level)
    if console:
        handlers["console"] = _console_handler(level)

    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "filters": {"context": {"()": _ContextFilter}},
            "formatters": {"default": {"format": LOG_FORMAT}},
            "handlers": handlers,
            "root": {"level": level, "handlers": list(handlers)},
        }
    )


def get_logger(name: Optional[str] = None, **context: str) -> ContextLoggerAdapter:
    return ContextLoggerAdapter(logging.getLogger(name), context)
