import numpy as np

from mvd_sr.voxel.grid import VoxelGrid, check_same_resolution


def iou(a: VoxelGrid, b: VoxelGrid) -> float:
    """Intersection over union of the occupied cells; two empty grids score 1."""
    check_same_resolution(a, b)
    union = np.count_nonzero(a.occupancy | b.occupancy)
    if union == 0:
        return 1.0
    return np.count_nonzero(a.occupancy & b.occupancy) / union
