"""Exposed-face quad meshes of voxel objects, surface sampling and OBJ text."""

from dataclasses import dataclass

import numpy as np

from mvd_sr.errors import EmptyGridError
from mvd_sr.voxel.grid import VoxelGrid

# (b, c) spans each face so that b x c points along +axis
_FACE_AXES = {0: (1, 2), 1: (2, 0), 2: (0, 1)}


@dataclass(frozen=True, eq=False)
class QuadMesh:
    """Unit-voxel faces of one grid, vertices scaled into the unit cube."""

    vertices: np.ndarray
    quads: np.ndarray
    resolution: int

    @property
    def areas(self) -> np.ndarray:
        return np.full(len(self.quads), 1.0 / self.resolution**2)

    @property
    def total_area(self) -> float:
        return float(self.areas.sum())

    def __len__(self) -> int:
        return len(self.quads)

    def corners(self) -> np.ndarray:
        return self.vertices[self.quads]


def exposed_face_mesh(grid: VoxelGrid) -> QuadMesh:
    occupied = np.pad(grid.occupancy, 1)
    corners = []
    for axis, (b, c) in _FACE_AXES.items():
        e_b = np.eye(3, dtype=np.int64)[b]
        e_c = np.eye(3, dtype=np.int64)[c]
        inner = [slice(1, -1)] * 3
        ahead = list(inner)
        ahead[axis] = slice(2, None)
        behind = list(inner)
        behind[axis] = slice(None, -2)
        cells = occupied[tuple(inner)]
        for outward, neighbour in ((1, ahead), (-1, behind)):
            faces = np.argwhere(cells & ~occupied[tuple(neighbour)])
            origin = faces.copy()
            if outward == 1:
                origin[:, axis] += 1
                quad = (origin, origin + e_b, origin + e_b + e_c, origin + e_c)
            else:
                quad = (origin, origin + e_c, origin + e_b + e_c, origin + e_b)
            corners.append(np.stack(quad, axis=1))

    lattice = np.concatenate(corners).reshape(-1, 3)
    if lattice.size == 0:
        empty = np.zeros((0, 4), dtype=np.int64)
        return QuadMesh(np.zeros((0, 3)), empty, grid.resolution)
    unique, inverse = np.unique(lattice, axis=0, return_inverse=True)
    quads = inverse.reshape(-1, 4).astype(np.int64)
    return QuadMesh(unique / grid.resolution, quads, grid.resolution)


def sample_surface(mesh: QuadMesh, n: int, seed: int = 0) -> np.ndarray:
    """Area-uniform points: a quad by area, then a uniform point inside it."""
    if len(mesh) == 0:
        raise EmptyGridError("cannot sample an empty mesh")
    if n < 1:
        raise ValueError(f"sample count must be positive, got {n}")
    rng = np.random.default_rng(seed)
    areas = mesh.areas
    chosen = rng.choice(len(mesh), size=n, p=areas / areas.sum())
    s, t = rng.random((2, n, 1))
    origin, along_b, _, along_c = np.moveaxis(mesh.corners()[chosen], 1, 0)
    return origin + s * (along_b - origin) + t * (along_c - origin)


def write_obj(mesh: QuadMesh) -> str:
    lines = [f"v {x:.9g} {y:.9g} {z:.9g}" for x, y, z in mesh.vertices]
    for a, b, c, d in mesh.quads + 1:
        lines.append(f"f {a} {b} {c}")
        lines.append(f"f {a} {c} {d}")
    return "\n".join(lines) + "\n" if lines else ""
