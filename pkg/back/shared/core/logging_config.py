"""Structured JSON logging configuration for rotodo."""
import logging
import sys
from typing import Optional, TextIO

from pythonjsonlogger.json import JsonFormatter

from shared.core.config import SETTINGS


def setup_logging(stream: Optional[TextIO] = None) -> None:
    """Configure logging for the CLI and the HTTP API.

    Args:
        stream: Target stream; the CLI passes stderr so stdout only carries reports.
    """
    log_format = "%(asctime)s %(name)s %(levelname)s %(message)s"
    handler = logging.StreamHandler(stream or sys.stdout)

    if SETTINGS.LOG_JSON:
        handler.setFormatter(JsonFormatter(log_format))
    else:
        handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
    log_level = logging.DEBUG if SETTINGS.DEBUG else logging.INFO

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers = []
    root_logger.addHandler(handler)

    # Third-party noise
    logging.getLogger("uvicorn").setLevel(logging.INFO)
    logging.getLogger("fastapi").setLevel(logging.INFO)

    logging.getLogger("rotodo").setLevel(log_level)

    logging.debug(
        "Logging configured",
        extra={
            "log_level": logging.getLevelName(log_level),
            "format": "json" if SETTINGS.LOG_JSON else "text"
        }
    )


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance for the given module name.

    Args:
        name: Module name (typically __name__)

    Returns:
        Logger instance
    """
    return logging.getLogger(f"rotodo.{name}")
