"""MVDV voxel files.

Little-endian layout: magic ``MVDV``, version u16, resolution u32, then u32
run lengths over the occupancy in x-fastest order, alternating empty and
occupied and always starting with an empty run.
"""

import os
import struct

import numpy as np

from mvd_sr.errors import FormatError
from mvd_sr.voxel.grid import MAX_RESOLUTION, VoxelGrid

MAGIC = b"MVDV"
VERSION = 1
HEADER = struct.Struct("<4sHI")


def encode(grid: VoxelGrid) -> bytes:
    flat = grid.occupancy.ravel(order="F").astype(np.int8)
    edges = np.flatnonzero(np.diff(flat)) + 1
    bounds = np.concatenate(([0], edges, [flat.size]))
    runs = np.diff(bounds)
    if flat[0]:
        runs = np.concatenate(([0], runs))
    header = HEADER.pack(MAGIC, VERSION, grid.resolution)
    return header + runs.astype("<u4").tobytes()


def decode(data: bytes, max_resolution: int = MAX_RESOLUTION) -> VoxelGrid:
    if len(data) < HEADER.size:
        raise FormatError("truncated header", len(data))
    magic, version, resolution = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", 4)
    if not 1 <= resolution <= max_resolution:
        raise FormatError(f"invalid resolution {resolution}", 6)

    body = len(data) - HEADER.size
    if body == 0:
        raise FormatError("missing run lengths", len(data))
    if body % 4:
        raise FormatError("truncated run length", len(data) - body % 4)
    runs = np.frombuffer(data, dtype="<u4", offset=HEADER.size).astype(np.int64)
    cells = resolution**3
    totals = np.cumsum(runs)
    if totals[-1] != cells:
        over = np.flatnonzero(totals > cells)
        offset = HEADER.size + 4 * int(over[0]) if over.size else len(data)
        raise FormatError(f"run lengths do not sum to {cells}", offset)

    values = np.arange(runs.size) % 2 == 1
    flat = np.repeat(values, runs)
    return VoxelGrid(flat.reshape((resolution,) * 3, order="F"))


def write_grid(path: os.PathLike, grid: VoxelGrid) -> None:
    with open(path, "wb") as f:
        f.write(encode(grid))


def read_grid(path: os.PathLike, max_resolution: int = MAX_RESOLUTION) -> VoxelGrid:
    with open(path, "rb") as f:
        return decode(f.read(), max_resolution)
