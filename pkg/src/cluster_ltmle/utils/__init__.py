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

"""Utility modules for cluster-ltmle."""

from .exceptions import LtmleError, DatasetValidationError
from .logging import setup_logging, get_logger

__all__ = ["LtmleError", "DatasetValidationError", "setup_logging", "get_logger"]
