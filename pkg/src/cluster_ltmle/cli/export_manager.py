# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T15:31:02
# Last Updated: 2026-10-19T15:31:02
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Run artifact management: staged writes committed on completion."""

import json
import math
import os
import shutil
import subprocess
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Any, Iterator, Union

import numpy as np
import pandas as pd

from .. import __version__
from ..utils.logging import get_logger

logger = get_logger(__name__)

STAGING_PREFIX = ".staging-"
VERSION_FILE = "VERSION"
CONFIG_FILE = "config.resolved.json"


def get_output_directory(directory: Union[str, Path]) -> Path:
    """Get the output directory path, creating it if needed."""
    output_dir = Path(directory)
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir


def create_staging_directory(output_dir: Path) -> Path:
    """Create a hidden, timestamped staging directory inside ``output_dir``."""
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S_%f")
    staging = output_dir / f"{STAGING_PREFIX}{timestamp}-{os.getpid()}"
    staging.mkdir(parents=True, exist_ok=False)
    return staging


def commit_staging(staging: Path, output_dir: Path) -> list:
    """Move every staged file into ``output_dir`` and remove the staging directory."""
    committed = []
    for path in sorted(staging.iterdir()):
        destination = output_dir / path.name
        if destination.is_dir():
            shutil.rmtree(destination)
        os.replace(path, destination)
        committed.append(destination)
    staging.rmdir()
    logger.info(f"Committed {len(committed)} files to {output_dir}")
    return committed


@contextmanager
def staged_output(directory: Union[str, Path]) -> Iterator[Path]:
    """Yield a staging directory; its files reach ``directory`` only if the block completes.

    An exception (including KeyboardInterrupt) discards the staged files,
    so an interrupted run never leaves a partial report behind.
    """
    output_dir = get_output_directory(directory)
    staging = create_staging_directory(output_dir)
    try:
        yield staging
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    commit_staging(staging, output_dir)


def cleanup_stale_staging(directory: Union[str, Path]) -> int:
    """Remove staging directories left by killed runs."""
    output_dir = Path(directory)
    if not output_dir.is_dir():
        return 0
    stale = [d for d in output_dir.iterdir() if d.is_dir() and d.name.startswith(STAGING_PREFIX)]
    for staging in stale:
        try:
            shutil.rmtree(staging)
            logger.debug(f"Removed stale staging directory {staging.name}")
        except OSError as e:
            logger.warning(f"Could not remove {staging.name}: {e}")
    return len(stale)


def version_string() -> str:
    """``git describe --always --dirty`` when run from a checkout, else the package version."""
    try:
        completed = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=10,
            check=False,
        )
    except (OSError, subprocess.SubprocessError):
        return __version__
    described = completed.stdout.strip()
    if completed.returncode != 0 or not described:
        return __version__
    return f"{__version__}+{described}"


def to_jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def write_json(path: Path, payload: Any) -> Path:
    """Deterministic JSON (sorted keys, NaN as null)."""
    path.write_text(json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_csv(path: Path, frame: pd.DataFrame) -> Path:
    """Full double precision, "NA" for missing values."""
    frame.to_csv(path, index=False, float_format="%.17g", na_rep="NA", lineterminator="\n")
    return path


def write_run_metadata(staging: Path, config_json: str) -> None:
    """Resolved config and version string, present in every output directory."""
    (staging / CONFIG_FILE).write_text(config_json + "\n", encoding="utf-8")
    (staging / VERSION_FILE).write_text(version_string() + "\n", encoding="utf-8")
