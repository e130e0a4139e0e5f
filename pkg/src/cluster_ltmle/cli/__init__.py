# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19T16:04:40
# Last Updated: 2026-10-19T16:04:40
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Command-line front end for cluster-ltmle."""

from .config import RunConfig, resolve_config
from .main import main

__all__ = ["RunConfig", "main", "resolve_config"]
