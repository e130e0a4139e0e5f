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

"""Main module for running cluster_ltmle.cli as a module."""

import sys

from .main import main

if __name__ == "__main__":
    sys.exit(main())
