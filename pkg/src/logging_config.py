"""
LogJet - Logging Configuration
JSON and colored formatters; every handler writes to stderr so reports on
stdout stay byte-deterministic.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Dict, Optional, Union

EXTRA_FIELDS = ("suite", "check", "seed")

CONSOLE_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s%(run_context)s"


def run_context(record: logging.LogRecord) -> Dict[str, object]:
    """suite/check/seed values passed through `extra=`."""
    return {name: getattr(record, name) for name in EXTRA_FIELDS if hasattr(record, name)}


class JSONFormatter(logging.Formatter):
    """
    One JSON object per record, for machine-readable run logs.
    """

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        entry.update(run_context(record))
        return json.dumps(entry, ensure_ascii=False)


class ColoredFormatter(logging.Formatter):
    """Level-colored console lines with the run context appended in brackets."""

    LEVEL_COLORS = {
        logging.DEBUG: "\033[36m",
        logging.INFO: "\033[32m",
        logging.WARNING: "\033[33m",
        logging.ERROR: "\033[31m",
        logging.CRITICAL: "\033[35m",
    }
    RESET = "\033[0m"

    def __init__(self, fmt: str = CONSOLE_FORMAT, datefmt: str = "%H:%M:%S"):
        super().__init__(fmt=fmt, datefmt=datefmt)

    def format(self, record: logging.LogRecord) -> str:
        plain = record.levelname
        context = run_context(record)
        record.levelname = f"{self.LEVEL_COLORS.get(record.levelno, self.RESET)}{plain:7}{self.RESET}"
        record.run_context = " [" + " ".join(f"{k}={v}" for k, v in context.items()) + "]" if context else ""
        try:
            return super().format(record)
        finally:
            record.levelname = plain
            del record.run_context


def _console_handler(json_format: bool) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JSONFormatter() if json_format else ColoredFormatter())
    return handler


def _file_handler(log_file: Union[str, Path]) -> logging.Handler:
    path = Path(log_file)
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = RotatingFileHandler(path, maxBytes=10 * 1024 * 1024, backupCount=3, encoding="utf-8")
    handler.setFormatter(JSONFormatter())
    return handler


def setup_logging(
    level: str = "INFO",
    json_format: bool = False,
    log_file: Optional[Union[str, Path]] = None,
) -> logging.Logger:
    """
    Configure the root logger.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR)
        json_format: If True, stderr gets JSON lines instead of colored text
        log_file: Optional path to a rotating JSON log file (10 MB, 3 backups)
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level.upper(), logging.INFO))

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    root_logger.addHandler(_console_handler(json_format))
    if log_file:
        root_logger.addHandler(_file_handler(log_file))
    return root_logger
