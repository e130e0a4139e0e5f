# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T09:12:40
# Last Updated: 2026-10-19T19:05:12
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Loguru sinks for command-line runs and a stage timer for long computations."""

import sys
import time
from contextlib import contextmanager
from typing import Iterator, Optional

from loguru import logger

from .exceptions import ConfigError

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)

# Run logs are read after the fact, so they carry the full date and no colour markup
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} | {message}"


def normalize_level(level: str) -> str:
    """Upper-case ``level`` and check it is a loguru level name.

    Raises:
        ConfigError: Unknown level
    """
    name = str(level).strip().upper()
    if name not in LOG_LEVELS:
        raise ConfigError(
            f"Unknown log level '{level}'. Valid levels: {', '.join(LOG_LEVELS)}",
            details={"valid_levels": list(LOG_LEVELS)},
        )
    return name


def setup_logging(
    level: str = "INFO",
    format_string: Optional[str] = None,
    file_path: Optional[str] = None,
) -> None:
    """Replace loguru's handlers with a stderr sink and an optional run-log file.

    Args:
        level: Log level name, case-insensitive
        format_string: Console format (defaults to ``CONSOLE_FORMAT``)
        file_path: Also write plain-text records here, rotated at 10 MB
    """
    level = normalize_level(level)
    logger.remove()
    logger.add(
        sys.stderr,
        format=format_string or CONSOLE_FORMAT,
        level=level,
        colorize=True,
        backtrace=True,
        diagnose=False,
    )
    if file_path:
        logger.add(
            file_path,
            format=FILE_FORMAT,
            level=level,
            rotation="10 MB",
            retention="7 days",
            compression="zip",
            backtrace=True,
            diagnose=False,
        )
    logger.debug(f"Logging configured with level: {level}")


def get_logger(name: str) -> "logger":
    """Logger bound to a module name."""
    return logger.bind(name=name)


@contextmanager
def log_duration(stage: str, level: str = "INFO") -> Iterator[None]:
    """Log how long the enclosed block took, also when it raises."""
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.log(level, f"{stage} finished in {time.perf_counter() - start:.1f} s")
