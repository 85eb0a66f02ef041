"""Paired low/high resolution training data.

A dataset directory holds ``train/``, ``val/`` and ``test/`` splits. Every
sample is a directory with the high resolution object, its any-occupied
down-sampling, both ODM sets and the shape it was drawn from::

    train/00000/shape.json
    train/00000/low.mvdv   high.mvdv
    train/00000/low/xp.mvdo ...   high/xp.mvdo ...
"""

import logging
import os
from pathlib import Path
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from mvd_sr.config import resolve
from mvd_sr.odm.codec import read_odm_set, write_odm_set
from mvd_sr.odm.maps import extract_all
from mvd_sr.predictor.model import Pair
from mvd_sr.voxel.codec import read_grid, write_grid
from mvd_sr.voxel.grid import MAX_RESOLUTION, VoxelGrid, downsample_any, solidify
from mvd_sr.voxel.shapes import dump_shape_spec, random_shape, rasterize

logger = logging.getLogger(__name__)

SPLITS = ("train", "val", "test")
INFO_FILE = "dataset.json"


class DatasetInfo(BaseModel):
    count: int = Field(100, ge=1)
    low_resolution: int = Field(16, ge=1)
    factor: int = Field(4, ge=1)
    seed: int = 0
    split: tuple[float, float, float] = (0.7, 0.1, 0.2)

    @field_validator("split")
    @classmethod
    def _check_split(cls, value: tuple[float, float, float]):
        if any(part < 0 for part in value) or not np.isclose(sum(value), 1.0):
            raise ValueError("split fractions must be non-negative and sum to 1")
        return value

    @property
    def high_resolution(self) -> int:
        return self.low_resolution * self.factor

    def split_sizes(self) -> dict[str, int]:
        train = round(self.count * self.split[0])
        val = min(round(self.count * self.split[1]), self.count - train)
        return {"train": train, "val": val, "test": self.count - train - val}


class Sample(NamedTuple):
    name: str
    low: VoxelGrid
    high: VoxelGrid


def _draw_object(
    rng: np.random.Generator, resolution: int, max_resolution: int
) -> tuple[str, VoxelGrid]:
    while True:
        spec = random_shape(rng)
        high = solidify(rasterize(spec, resolution, max_resolution))
        # thin primitives can miss every cell centre at low resolutions
        if high.count:
            return dump_shape_spec(spec), high


def write_sample(directory: os.PathLike, low: VoxelGrid, high: VoxelGrid) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_grid(directory / "low.mvdv", low)
    write_grid(directory / "high.mvdv", high)
    write_odm_set(directory / "low", extract_all(low))
    write_odm_set(directory / "high", extract_all(high))


def generate_dataset(
    out_dir: os.PathLike,
    count: int,
    low_resolution: int,
    factor: int,
    seed: int = 0,
    split: tuple[float, float, float] = (0.7, 0.1, 0.2),
    max_resolution: int = MAX_RESOLUTION,
) -> DatasetInfo:
    settings = dict(
        count=count,
        low_resolution=low_resolution,
        factor=factor,
        seed=seed,
        split=split,
    )
    info = resolve(DatasetInfo, settings, {})
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(info.seed)

    index = 0
    for name, size in info.split_sizes().items():
        for _ in range(size):
            spec, high = _draw_object(rng, info.high_resolution, max_resolution)
            low = downsample_any(high, info.factor)
            sample_dir = out_dir / name / f"{index:05d}"
            write_sample(sample_dir, low, high)
            (sample_dir / "shape.json").write_text(spec)
            index += 1
        logger.debug("wrote %d %s samples", size, name)

    (out_dir / INFO_FILE).write_text(info.model_dump_json(indent=2))
    logger.info(
        "generated %d samples at %d^3 -> %d^3 in %s",
        info.count,
        info.low_resolution,
        info.high_resolution,
        out_dir,
    )
    return info


def split_dir(directory: os.PathLike, split: str) -> Path:
    """The split's directory when ``directory`` is a dataset root, else itself."""
    directory = Path(directory)
    if (candidate := directory / split).is_dir():
        return candidate
    return directory


def sample_dirs(directory: os.PathLike) -> list[Path]:
    return sorted(
        path
        for path in Path(directory).iterdir()
        if (path / "low").is_dir() and (path / "high").is_dir()
    )


def load_pairs(
    directory: os.PathLike, max_resolution: int = MAX_RESOLUTION
) -> list[Pair]:
    pairs = []
    for path in sample_dirs(directory):
        lows = read_odm_set(path / "low", max_resolution)
        highs = read_odm_set(path / "high", max_resolution)
        pairs.extend(zip(lows, highs))
    return pairs


def load_samples(
    directory: os.PathLike, max_resolution: int = MAX_RESOLUTION
) -> list[Sample]:
    return [
        Sample(
            path.name,
            read_grid(path / "low.mvdv", max_resolution),
            read_grid(path / "high.mvdv", max_resolution),
        )
        for path in sample_dirs(directory)
    ]
