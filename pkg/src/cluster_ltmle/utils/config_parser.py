# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T09:12:40
# Last Updated: 2026-10-19T09:12:40
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Parsing of run-config, schema and DGP files (JSON with a JSON5 fallback)."""

import json
from pathlib import Path
from typing import Any, Dict, Union

import json5

from .exceptions import ConfigError
from .logging import get_logger

logger = get_logger(__name__)


def parse_config_text(text: str, source: str = "<string>") -> Dict[str, Any]:
    """Parse a configuration document.

    Strict JSON is tried first; files written by hand (comments, single
    quotes, trailing commas) are accepted through the json5 parser.

    Args:
        text: Document contents
        source: Name used in error messages

    Returns:
        Parsed mapping

    Raises:
        ConfigError: If neither parser accepts the document or the top level
            is not a mapping
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as json_error:
        try:
            data = json5.loads(text)
            logger.debug(f"Parsed {source} with json5 (comments or relaxed syntax present)")
        except ValueError as json5_error:
            raise ConfigError(
                f"Cannot parse {source}: {json5_error}",
                details=_format_parse_error(text, json_error),
            ) from json5_error

    if not isinstance(data, dict):
        raise ConfigError(
            f"{source} must contain a mapping at the top level, got {type(data).__name__}"
        )
    return data


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read and parse a configuration file.

    Raises:
        ConfigError: If the file is missing or cannot be parsed
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError(f"Config file not found: {file_path}", details={"path": str(file_path)})
    return parse_config_text(file_path.read_text(encoding="utf-8"), source=str(file_path))


def _format_parse_error(text: str, error: json.JSONDecodeError) -> Dict[str, Any]:
    """Locate the strict-JSON error for the error report."""
    lines = text.splitlines()
    line_text = lines[error.lineno - 1].strip() if 0 < error.lineno <= len(lines) else ""
    return {
        "line": error.lineno,
        "column": error.colno,
        "reason": error.msg,
        "context": line_text,
    }
