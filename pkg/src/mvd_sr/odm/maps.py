from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from mvd_sr.errors import ResolutionMismatchError
from mvd_sr.odm.views import Direction, ViewId
from mvd_sr.voxel.grid import VoxelGrid


def view_columns(volume: np.ndarray, view: ViewId) -> np.ndarray:
    """Returns a view of ``volume`` indexed ``[u, v, t]``.

    ``t`` counts voxel layers from the viewing face inward. No data is copied,
    so writes go through to ``volume``.
    """
    columns = np.moveaxis(volume, view.axis.index, -1)
    if view.direction == Direction.NEGATIVE:
        columns = columns[..., ::-1]
    return columns


@dataclass(frozen=True, eq=False)
class Odm:
    """Orthographic depth map: 0 is background, d >= 1 the 1-based surface layer."""

    view: ViewId
    depth: np.ndarray

    def __post_init__(self) -> None:
        depth = np.asarray(self.depth)
        if depth.ndim != 2 or depth.shape[0] != depth.shape[1] or depth.size == 0:
            raise ValueError(f"depth must be a non-empty square map, got {depth.shape}")
        if not np.issubdtype(depth.dtype, np.integer):
            raise ValueError(f"depth must be integral, got {depth.dtype}")
        if depth.min() < 0 or depth.max() > depth.shape[0]:
            raise ValueError(f"depth values must lie in [0, {depth.shape[0]}]")
        depth = depth.astype(np.int32, copy=True)
        depth.setflags(write=False)
        object.__setattr__(self, "view", ViewId(self.view))
        object.__setattr__(self, "depth", depth)

    @property
    def resolution(self) -> int:
        return self.depth.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Odm):
            return NotImplemented
        return self.view == other.view and np.array_equal(self.depth, other.depth)

    def __repr__(self) -> str:
        return f"Odm(view={self.view.value}, resolution={self.resolution})"


@dataclass(frozen=True, eq=False)
class OdmSet:
    maps: Mapping[ViewId, Odm]

    def __post_init__(self) -> None:
        maps = {ViewId(view): odm for view, odm in self.maps.items()}
        if set(maps) != set(ViewId):
            missing = ", ".join(v.value for v in ViewId if v not in maps)
            raise ValueError(f"an ODM set needs all six views, missing {missing}")
        for view, odm in maps.items():
            if odm.view != view:
                raise ValueError(f"ODM for {odm.view.value} stored under {view.value}")
        resolutions = {odm.resolution for odm in maps.values()}
        if len(resolutions) != 1:
            raise ValueError(f"ODM resolutions differ: {sorted(resolutions)}")
        object.__setattr__(self, "maps", {view: maps[view] for view in ViewId})

    @classmethod
    def from_list(cls, odms: list[Odm]) -> "OdmSet":
        return cls({odm.view: odm for odm in odms})

    @property
    def resolution(self) -> int:
        return next(iter(self.maps.values())).resolution

    def __getitem__(self, view: ViewId) -> Odm:
        return self.maps[view]

    def __iter__(self) -> Iterator[Odm]:
        return iter(self.maps.values())

    def __len__(self) -> int:
        return len(self.maps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OdmSet):
            return NotImplemented
        return all(self[v] == other[v] for v in ViewId)

    def silhouettes(self) -> dict[ViewId, np.ndarray]:
        return {view: silhouette(odm) for view, odm in self.maps.items()}


def extract_odm(grid: VoxelGrid, view: ViewId) -> Odm:
    columns = view_columns(grid.occupancy, view)
    hit = columns.any(axis=-1)
    first = columns.argmax(axis=-1)
    return Odm(view, np.where(hit, first + 1, 0))


def extract_all(grid: VoxelGrid) -> OdmSet:
    return OdmSet({view: extract_odm(grid, view) for view in ViewId})


def silhouette(odm: Odm) -> np.ndarray:
    return odm.depth != 0


def upsample_odm_nn(odm: Odm, factor: int) -> Odm:
    """Nearest-neighbour up-sampling that stays aligned with ``upsample_nn``.

    A surface at low-res layer d lands on the first high-res layer of the
    up-sampled block, ``(d - 1) * factor + 1``.
    """
    if factor < 1:
        raise ValueError(f"factor must be at least 1, got {factor}")
    if factor == 1:
        return odm
    depth = np.repeat(np.repeat(odm.depth, factor, axis=0), factor, axis=1)
    return Odm(odm.view, np.where(depth > 0, (depth - 1) * factor + 1, 0))


def upsample_set_nn(odms: OdmSet, factor: int) -> OdmSet:
    return OdmSet({odm.view: upsample_odm_nn(odm, factor) for odm in odms})


def check_set_resolution(odms: OdmSet, expected: int) -> None:
    if odms.resolution != expected:
        raise ResolutionMismatchError(expected, odms.resolution, what="ODM")
