from pathlib import Path

import numpy as np
import pytest

from mvd_sr.voxel import VoxelGrid

GOLDEN = Path(__file__).parent / "golden"


def random_grid(rng: np.random.Generator, resolution: int, density: float = 0.4):
    return VoxelGrid(rng.random((resolution,) * 3) < density)


def box_grid(resolution: int, lo, hi) -> VoxelGrid:
    """Voxels with lo <= index < hi on every axis."""
    occupancy = np.zeros((resolution,) * 3, dtype=bool)
    occupancy[lo[0] : hi[0], lo[1] : hi[1], lo[2] : hi[2]] = True
    return VoxelGrid(occupancy)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def golden():
    return GOLDEN
