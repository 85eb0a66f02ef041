"""Model carving: turns six high resolution ODMs and a low resolution object
into a high resolution object by removing voxels from its nearest-neighbour
up-sampling.

Structure carving removes a voxel once ``agreement_votes`` distinct views see
background through it. Detail carving needs no agreement: every view clears
the layers strictly in front of its predicted surface.
"""

import logging
from typing import Mapping

import numpy as np

from mvd_sr.config import CarveConfig
from mvd_sr.errors import ResolutionMismatchError
from mvd_sr.odm.maps import Odm, OdmSet, check_set_resolution, view_columns
from mvd_sr.odm.views import ViewId
from mvd_sr.voxel.grid import VoxelGrid, upsample_nn

logger = logging.getLogger(__name__)


def _round_half_up(values: np.ndarray) -> np.ndarray:
    return np.floor(values + 0.5)


def smooth_odm(odm: Odm, config: CarveConfig) -> Odm:
    """Edge-preserving mean over the Chebyshev neighbourhood.

    Only non-zero neighbours within ``smoothing_threshold`` of the centre
    depth take part, so background pixels and silhouettes never change.
    """
    radius = config.smoothing_radius
    if radius == 0:
        return odm
    depth = odm.depth.astype(np.float64)
    size = odm.resolution
    padded = np.pad(depth, radius)
    total = np.zeros_like(depth)
    count = np.zeros_like(depth)
    for du in range(-radius, radius + 1):
        for dv in range(-radius, radius + 1):
            shifted = padded[
                radius + du : radius + du + size, radius + dv : radius + dv + size
            ]
            include = (shifted != 0) & (
                np.abs(shifted - depth) <= config.smoothing_threshold
            )
            total += np.where(include, shifted, 0.0)
            count += include
    mean = np.divide(total, count, out=np.zeros_like(total), where=count > 0)
    smoothed = np.where(depth > 0, _round_half_up(mean), 0).astype(np.int64)
    return Odm(odm.view, np.clip(smoothed, 0, size))


def structure_carve(
    grid: VoxelGrid, silhouettes: Mapping[ViewId, np.ndarray], config: CarveConfig
) -> VoxelGrid:
    size = grid.resolution
    votes = np.zeros((size,) * 3, dtype=np.uint8)
    for view, mask in silhouettes.items():
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (size, size):
            raise ResolutionMismatchError(size, mask.shape[0], what="silhouette")
        # one vote per view for every voxel behind a background pixel
        view_columns(votes, ViewId(view))[...] += (~mask)[..., None]
    removed = votes >= config.agreement_votes
    return VoxelGrid(grid.occupancy & ~removed)


def detail_carve(grid: VoxelGrid, odms: OdmSet) -> VoxelGrid:
    size = grid.resolution
    check_set_resolution(odms, size)
    occupancy = np.array(grid.occupancy)
    layers = np.arange(size)
    for odm in odms:
        in_front = layers[None, None, :] < (odm.depth - 1)[..., None]
        view_columns(occupancy, odm.view)[in_front] = False
    return VoxelGrid(occupancy)


def carve(grid_low: VoxelGrid, odms_high: OdmSet, config: CarveConfig) -> VoxelGrid:
    expected = grid_low.resolution * config.factor
    check_set_resolution(odms_high, expected)
    grid = upsample_nn(grid_low, config.factor)
    smoothed = OdmSet({odm.view: smooth_odm(odm, config) for odm in odms_high})
    grid = structure_carve(grid, smoothed.silhouettes(), config)
    grid = detail_carve(grid, smoothed)
    logger.debug(
        "carved %d -> %d voxels at %d^3", grid_low.count, grid.count, grid.resolution
    )
    return grid
