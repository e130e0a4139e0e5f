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

"""Pytest configuration and fixtures for cluster-ltmle tests."""

import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest
from scipy.special import expit

from cluster_ltmle.data import Dataset, Regimen
from cluster_ltmle.learners import LearnerSpec
from cluster_ltmle.simulation import DgpConfig, generate_dataset
from cluster_ltmle.types import LearnerKind


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir, ignore_errors=True)


@pytest.fixture
def small_dataset():
    """Eight hand-written subjects, K=3, three clusters, already imputed."""
    return Dataset(
        subject_ids=np.arange(1, 9),
        cluster_ids=np.array(["a", "a", "a", "b", "b", "c", "c", "c"], dtype=object),
        w=np.array([[0.1], [0.5], [-0.3], [1.2], [0.0], [-1.0], [0.7], [0.2]]),
        c=np.array(
            [[0, 0, 0], [0, 0, 0], [0, 0, 1], [0, 0, 0], [0, 1, 1], [1, 1, 1], [0, 0, 0], [0, 0, 0]]
        ),
        l=np.array([[0, 1], [1, 0], [0, 0], [1, 1], [1, 0], [0, 0], [0, 0], [0, 1]], dtype=float),
        a=np.array([[1, 1], [1, 0], [1, 0], [0, 0], [1, 0], [0, 0], [1, 1], [0, 0]]),
        y=np.array([1.0, 1.0, 0.0, 3.0, 0.0, 0.0, 0.0, 2.0]),
        w_names=("w.1",),
    )


@pytest.fixture
def small_dgp():
    """Default DGP shrunk to 6 clusters of 60 subjects."""
    return DgpConfig(clusters=6, per_cluster=60)


@pytest.fixture
def simulated_dataset(small_dgp):
    """A canonical K=3 data set from the simulation DGP (n=360)."""
    return generate_dataset(small_dgp, seed=11)


def _discrete_dataset(n: int, seed: int) -> Dataset:
    """K=2, binary W, L_1, A_1, outcome in {0, 1, 2}, every cell populated."""
    rng = np.random.default_rng(seed)
    w = rng.integers(0, 2, n).astype(float)
    c1 = (rng.random(n) < 0.1).astype(int)
    l1 = ((rng.random(n) < expit(-0.5 + w)) & (c1 == 0)).astype(float)
    a1 = ((rng.random(n) < expit(0.3 - 0.8 * l1 + 0.5 * w)) & (c1 == 0)).astype(int)
    c2 = np.maximum(c1, (rng.random(n) < 0.1 + 0.1 * l1).astype(int))
    bump = (rng.random(n) < expit(-1.0 + 0.5 * w - 0.7 * a1 + 0.4 * l1)).astype(float)
    y = np.where(c2 == 0, l1 + bump, 0.0)
    return Dataset(
        subject_ids=np.arange(n),
        cluster_ids=np.arange(n) % 10,
        w=w.reshape(-1, 1),
        c=np.column_stack([c1, c2]),
        l=l1.reshape(-1, 1),
        a=a1.reshape(-1, 1),
        y=y,
        w_names=("w.1",),
    )


@pytest.fixture
def discrete_dataset():
    return _discrete_dataset(3000, seed=5)


@pytest.fixture
def strata():
    return LearnerSpec(kind=LearnerKind.STRATA)


@pytest.fixture
def logistic():
    return LearnerSpec(kind=LearnerKind.LOGISTIC)


@pytest.fixture
def always_treat():
    return Regimen(a_bar=(1, 1))


@pytest.fixture
def never_treat():
    return Regimen(a_bar=(0, 0))
