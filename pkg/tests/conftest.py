"""
Shared fixtures for the tensorsketch test suite.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the repository root to the path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from tensorsketch.models.report_models import TuckerSpec
from tensorsketch.models.tensor_models import DenseTensor

from tests.helpers import outer


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def arange_tensor():
    """Shape (2, 3, 4) tensor holding 0..23 in row-major order."""
    return DenseTensor.from_array(np.arange(24, dtype=np.float64).reshape(2, 3, 4))


@pytest.fixture
def gaussian_tensor(rng):
    return DenseTensor.from_array(rng.standard_normal((6, 5, 4)))


@pytest.fixture
def rank_one_tensor():
    u = np.array([1.0, 2.0, -1.0])
    v = np.array([0.5, 0.0, 1.5, -2.0])
    w = np.array([3.0, 1.0])
    return DenseTensor.from_array(outer(u, v, w)), (u, v, w)


@pytest.fixture
def planted_spec():
    return TuckerSpec(dims=[12, 10, 8], ranks=[2, 2, 2], core_decay=0.5, noise_sigma=0.0, seed=3)
