import struct

import numpy as np
import pytest

from conftest import random_grid
from mvd_sr.errors import FormatError
from mvd_sr.voxel import VoxelGrid, decode, encode, read_grid, write_grid
from mvd_sr.voxel.codec import HEADER


def runs_of(data: bytes) -> list[int]:
    return list(np.frombuffer(data, dtype="<u4", offset=HEADER.size))


def test_empty_grid_is_one_empty_run():
    data = encode(VoxelGrid.empty(2))
    assert data[:4] == b"MVDV"
    assert struct.unpack_from("<HI", data, 4) == (1, 2)
    assert runs_of(data) == [8]


def test_full_grid_starts_with_a_zero_run():
    assert runs_of(encode(VoxelGrid.full(2))) == [0, 8]


def test_random_grid_round_trips(rng):
    grid = random_grid(rng, 8)
    assert decode(encode(grid)) == grid


def test_golden_file_uses_x_fastest_order(golden):
    grid = read_grid(golden / "two_voxels.mvdv")
    expected = np.zeros((2, 2, 2), dtype=bool)
    expected[1, 0, 0] = True
    expected[0, 0, 1] = True
    assert grid == VoxelGrid(expected)
    assert encode(grid) == (golden / "two_voxels.mvdv").read_bytes()


def test_write_then_read(tmp_path, rng):
    grid = random_grid(rng, 5)
    path = tmp_path / "grid.mvdv"
    write_grid(path, grid)
    assert read_grid(path) == grid


def _header(resolution=2, magic=b"MVDV", version=1) -> bytes:
    return HEADER.pack(magic, version, resolution)


def _runs(*runs) -> bytes:
    return np.array(runs, dtype="<u4").tobytes()


@pytest.mark.parametrize(
    "data, offset",
    [
        (b"MVD", 3),
        (_header(magic=b"XXXX") + _runs(8), 0),
        (_header(version=2) + _runs(8), 4),
        (_header(resolution=0) + _runs(0), 6),
        (_header(), 10),
        (_header() + _runs(8)[:3], 10),
        (_header() + _runs(4, 3), 18),
        (_header() + _runs(4, 3, 2), 18),
    ],
)
def test_malformed_streams_name_the_offset(data, offset):
    with pytest.raises(FormatError) as e:
        decode(data)
    assert e.value.offset == offset
    assert f"offset {offset}" in str(e.value)
