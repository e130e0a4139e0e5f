# Copyright (c) 2026 Bivex
#
# Author: Bivex
# Available for contact via email: support@b-b.top
# For up-to-date contact information:
# https://github.com/bivex
#
# Created: 2026-10-19 16:20
# Last Updated: 2026-10-19 16:20
#
# Licensed under the MIT License.
# Commercial licensing available upon request.

"""Tests for cluster-ltmle."""
