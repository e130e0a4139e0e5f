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

"""Seed derivation shared by bootstrap, simulation and oracle shards."""

from typing import Sequence

import numpy as np


def derive_seed(master_seed: int, *keys: int) -> int:
    """Derive a child seed from a master seed and integer keys.

    The mapping depends only on its arguments, so replicate ``r`` gets the
    same stream whatever order (or worker) it runs in.
    """
    entropy: Sequence[int] = [int(master_seed), *[int(k) for k in keys]]
    state = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


def make_rng(master_seed: int, *keys: int) -> np.random.Generator:
    """Create a generator seeded by :func:`derive_seed`."""
    return np.random.default_rng(derive_seed(master_seed, *keys))
