import itertools

import numpy as np
import pytest

from conftest import box_grid, random_grid
from mvd_sr.errors import ResolutionLimitError, ResolutionMismatchError
from mvd_sr.voxel import VoxelGrid, downsample_any, solidify, upsample_nn


def test_grid_is_read_only_copy():
    occupancy = np.zeros((2, 2, 2), dtype=bool)
    grid = VoxelGrid(occupancy)
    occupancy[0, 0, 0] = True
    assert grid.count == 0
    with pytest.raises(ValueError):
        grid.occupancy[0, 0, 0] = True


@pytest.mark.parametrize("shape", [(2, 2, 3), (2, 2), (0, 0, 0)])
def test_grid_rejects_non_cubes(shape):
    with pytest.raises(ValueError):
        VoxelGrid(np.zeros(shape, dtype=bool))


def test_upsample_single_corner_voxel():
    low = np.zeros((2, 2, 2), dtype=bool)
    low[0, 0, 0] = True
    high = upsample_nn(VoxelGrid(low), 2)
    assert high == box_grid(4, (0, 0, 0), (2, 2, 2))


def test_upsample_factor_one_is_identity(rng):
    grid = random_grid(rng, 5)
    assert upsample_nn(grid, 1) == grid


def test_upsample_matches_floor_division(rng):
    grid = random_grid(rng, 4)
    high = upsample_nn(grid, 3)
    assert high.resolution == 12
    for x, y, z in itertools.product(range(12), repeat=3):
        assert high.occupancy[x, y, z] == grid.occupancy[x // 3, y // 3, z // 3]
    assert high.count == 27 * grid.count


@pytest.mark.parametrize("a, b", [(1, 4), (2, 2), (2, 3), (3, 4)])
def test_upsample_composes(rng, a, b):
    grid = random_grid(rng, 4)
    assert upsample_nn(upsample_nn(grid, a), b) == upsample_nn(grid, a * b)


def test_upsample_respects_limit():
    with pytest.raises(ResolutionLimitError):
        upsample_nn(VoxelGrid.empty(8), 4, max_resolution=16)


def test_downsample_any_covers_the_fine_grid(rng):
    grid = random_grid(rng, 12, density=0.05)
    low = downsample_any(grid, 3)
    assert low.resolution == 4
    assert grid.is_subset_of(upsample_nn(low, 3))


def test_downsample_any_needs_divisible_resolution():
    with pytest.raises(ResolutionMismatchError):
        downsample_any(VoxelGrid.empty(10), 4)


def test_solidify_fills_a_hollow_shell():
    shell = np.ones((4, 4, 4), dtype=bool)
    shell[1:3, 1:3, 1:3] = False
    assert solidify(VoxelGrid(shell)) == VoxelGrid.full(4)


def test_solidify_leaves_open_cavities():
    cup = np.ones((4, 4, 4), dtype=bool)
    cup[1:3, 1:3, 1:] = False
    assert solidify(VoxelGrid(cup)) == VoxelGrid(cup)


def test_solidify_trivial_cases(rng):
    assert solidify(VoxelGrid.full(3)) == VoxelGrid.full(3)
    assert solidify(VoxelGrid.empty(3)) == VoxelGrid.empty(3)
    grid = random_grid(rng, 8)
    once = solidify(grid)
    assert grid.is_subset_of(once)
    assert solidify(once) == once
