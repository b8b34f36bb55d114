"""Shared fixtures; tests import the flat modules from the project root."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from construction import CubeConstruction  # noqa: E402
from experiment_config import ExperimentConfig  # noqa: E402
from perm_core import Permutation  # noqa: E402


@pytest.fixture(scope="session")
def desk_construction():
    """K=7, d=2: SL_3(F_2) on 7 points, 49-point square."""
    return CubeConstruction(ExperimentConfig(d=2))


@pytest.fixture(scope="session")
def desk_family(desk_construction):
    return desk_construction.build_F_N()


@pytest.fixture
def sym3_generators():
    return [Permutation.from_cycles([(0, 1)], 3), Permutation.from_cycles([(0, 1, 2)], 3)]
