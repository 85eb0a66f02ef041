from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from mvd_sr.errors import ResolutionLimitError, ResolutionMismatchError

MAX_RESOLUTION = 1024


@dataclass(frozen=True, eq=False)
class VoxelGrid:
    """Cubic binary occupancy grid indexed ``occupancy[x, y, z]``.

    The array is made read-only on construction so grids can be shared
    between threads.
    """

    occupancy: np.ndarray

    def __post_init__(self) -> None:
        occupancy = np.asarray(self.occupancy, dtype=bool)
        if occupancy.ndim != 3 or len(set(occupancy.shape)) != 1:
            raise ValueError(f"occupancy must be a cube, got shape {occupancy.shape}")
        if occupancy.shape[0] < 1:
            raise ValueError("resolution must be at least 1")
        if occupancy is self.occupancy:
            occupancy = occupancy.copy()
        occupancy.setflags(write=False)
        object.__setattr__(self, "occupancy", occupancy)

    @classmethod
    def empty(cls, resolution: int) -> "VoxelGrid":
        return cls(np.zeros((resolution,) * 3, dtype=bool))

    @classmethod
    def full(cls, resolution: int) -> "VoxelGrid":
        return cls(np.ones((resolution,) * 3, dtype=bool))

    @property
    def resolution(self) -> int:
        return self.occupancy.shape[0]

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.occupancy))

    def is_subset_of(self, other: "VoxelGrid") -> bool:
        check_same_resolution(self, other)
        return not np.any(self.occupancy & ~other.occupancy)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VoxelGrid):
            return NotImplemented
        return np.array_equal(self.occupancy, other.occupancy)

    def __hash__(self) -> int:
        return hash((self.resolution, self.occupancy.tobytes()))

    def __repr__(self) -> str:
        return f"VoxelGrid(resolution={self.resolution}, count={self.count})"


def check_same_resolution(a: VoxelGrid, b: VoxelGrid) -> None:
    if a.resolution != b.resolution:
        raise ResolutionMismatchError(a.resolution, b.resolution)


def upsample_nn(
    grid: VoxelGrid, factor: int, max_resolution: int = MAX_RESOLUTION
) -> VoxelGrid:
    if factor < 1:
        raise ValueError(f"factor must be at least 1, got {factor}")
    if grid.resolution * factor > max_resolution:
        raise ResolutionLimitError(grid.resolution * factor, max_resolution)
    if factor == 1:
        return grid
    occupancy = grid.occupancy
    for axis in range(3):
        occupancy = np.repeat(occupancy, factor, axis=axis)
    return VoxelGrid(occupancy)


def downsample_any(grid: VoxelGrid, factor: int) -> VoxelGrid:
    """Coarse cell is occupied iff any fine cell of its block is."""
    if factor < 1:
        raise ValueError(f"factor must be at least 1, got {factor}")
    if grid.resolution % factor:
        raise ResolutionMismatchError(
            grid.resolution // factor * factor, grid.resolution
        )
    low = grid.resolution // factor
    blocks = grid.occupancy.reshape(low, factor, low, factor, low, factor)
    return VoxelGrid(blocks.any(axis=(1, 3, 5)))


def solidify(grid: VoxelGrid) -> VoxelGrid:
    """Fills every empty cell not 6-connected to the outside of the grid."""
    # the default structuring element is the 6-neighbourhood
    return VoxelGrid(ndimage.binary_fill_holes(grid.occupancy))
