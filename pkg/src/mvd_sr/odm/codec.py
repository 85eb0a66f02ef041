"""MVDO depth map files: magic, version u16, view u8, resolution u32, R*R u32 depths (u fastest)."""

import os
import struct
from pathlib import Path

import numpy as np

from mvd_sr.errors import FormatError
from mvd_sr.odm.maps import Odm, OdmSet
from mvd_sr.odm.views import ViewId
from mvd_sr.voxel.grid import MAX_RESOLUTION

MAGIC = b"MVDO"
VERSION = 1
HEADER = struct.Struct("<4sHBI")
SUFFIX = ".mvdo"


def encode_odm(odm: Odm) -> bytes:
    header = HEADER.pack(MAGIC, VERSION, odm.view.index, odm.resolution)
    return header + odm.depth.ravel(order="F").astype("<u4").tobytes()


def decode_odm(data: bytes, max_resolution: int = MAX_RESOLUTION) -> Odm:
    if len(data) < HEADER.size:
        raise FormatError("truncated header", len(data))
    magic, version, view, resolution = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", 4)
    if view > 5:
        raise FormatError(f"invalid view id {view}", 6)
    if not 1 <= resolution <= max_resolution:
        raise FormatError(f"invalid resolution {resolution}", 7)
    expected = HEADER.size + 4 * resolution**2
    if len(data) != expected:
        raise FormatError(
            f"expected {resolution ** 2} depth values", min(len(data), expected)
        )
    depth = np.frombuffer(data, dtype="<u4", offset=HEADER.size).astype(np.int64)
    if depth.max() > resolution:
        bad = int(np.flatnonzero(depth > resolution)[0])
        raise FormatError("depth exceeds the resolution", HEADER.size + 4 * bad)
    return Odm(ViewId.from_index(view), depth.reshape((resolution,) * 2, order="F"))


def write_odm(path: os.PathLike, odm: Odm) -> None:
    with open(path, "wb") as f:
        f.write(encode_odm(odm))


def read_odm(path: os.PathLike, max_resolution: int = MAX_RESOLUTION) -> Odm:
    with open(path, "rb") as f:
        return decode_odm(f.read(), max_resolution)


def odm_path(directory: os.PathLike, view: ViewId) -> Path:
    return Path(directory) / f"{view.value}{SUFFIX}"


def write_odm_set(directory: os.PathLike, odms: OdmSet) -> list[Path]:
    Path(directory).mkdir(parents=True, exist_ok=True)
    paths = []
    for odm in odms:
        path = odm_path(directory, odm.view)
        write_odm(path, odm)
        paths.append(path)
    return paths


def read_odm_set(directory: os.PathLike, max_resolution: int = MAX_RESOLUTION) -> OdmSet:
    odms = {}
    for view in ViewId:
        odm = read_odm(odm_path(directory, view), max_resolution)
        if odm.view != view:
            raise FormatError(f"{odm_path(directory, view)} holds view {odm.view}", 6)
        odms[view] = odm
    try:
        return OdmSet(odms)
    except ValueError as e:
        raise FormatError(f"{directory}: {e}", 0) from e
