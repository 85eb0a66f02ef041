"""Analytic test shapes in normalized object coordinates.

A shape is rasterized by testing each cell centre ``((i + 0.5) / R, ...)``
against its inside-test. Boxes are closed, spheres and ellipsoids are open,
so a zero radius never occupies anything.
"""

from typing import Annotated, Literal, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    TypeAdapter,
    ValidationError,
    model_validator,
)

from mvd_sr.errors import ShapeSpecError
from mvd_sr.voxel.grid import MAX_RESOLUTION, VoxelGrid

Unit = Annotated[float, Field(ge=0.0, le=1.0)]
Vec3 = tuple[Unit, Unit, Unit]


class _Shape(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class Box(_Shape):
    kind: Literal["box"] = "box"
    lo: Vec3
    hi: Vec3

    @model_validator(mode="after")
    def _ordered(self) -> "Box":
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError("box corner lo must not exceed hi")
        return self

    def contains(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        (x0, y0, z0), (x1, y1, z1) = self.lo, self.hi
        return (
            (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1) & (z >= z0) & (z <= z1)
        )


class Sphere(_Shape):
    kind: Literal["sphere"] = "sphere"
    center: Vec3
    radius: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _inside(self) -> "Sphere":
        _check_extent(self.center, (self.radius,) * 3)
        return self

    def contains(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        cx, cy, cz = self.center
        return (x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2 < self.radius**2


class Ellipsoid(_Shape):
    kind: Literal["ellipsoid"] = "ellipsoid"
    center: Vec3
    radii: tuple[float, float, float]

    @model_validator(mode="after")
    def _inside(self) -> "Ellipsoid":
        if min(self.radii) < 0:
            raise ValueError("ellipsoid radii must be non-negative")
        _check_extent(self.center, self.radii)
        return self

    def contains(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        if min(self.radii) == 0:
            return np.zeros(np.broadcast_shapes(x.shape, y.shape, z.shape), bool)
        (cx, cy, cz), (rx, ry, rz) = self.center, self.radii
        return ((x - cx) / rx) ** 2 + ((y - cy) / ry) ** 2 + ((z - cz) / rz) ** 2 < 1


class UnionShape(_Shape):
    kind: Literal["union"] = "union"
    children: list["ShapeSpec"] = Field(min_length=1)

    def contains(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        inside = self.children[0].contains(x, y, z)
        for child in self.children[1:]:
            inside = inside | child.contains(x, y, z)
        return inside


class Difference(_Shape):
    kind: Literal["difference"] = "difference"
    base: "ShapeSpec"
    subtract: "ShapeSpec"

    def contains(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        return self.base.contains(x, y, z) & ~self.subtract.contains(x, y, z)


ShapeSpec = Annotated[
    Union[Box, Sphere, Ellipsoid, UnionShape, Difference],
    Field(discriminator="kind"),
]

UnionShape.model_rebuild()
Difference.model_rebuild()

_ADAPTER: TypeAdapter = TypeAdapter(ShapeSpec)


def _check_extent(center: Vec3, radii: tuple[float, float, float]) -> None:
    for c, r in zip(center, radii):
        if c - r < 0.0 or c + r > 1.0:
            raise ValueError("shape extends outside the unit cube")


def load_shape_spec(text: str) -> ShapeSpec:
    try:
        return _ADAPTER.validate_json(text)
    except ValidationError as e:
        raise ShapeSpecError(f"invalid shape spec: {e.errors()[0]['msg']}") from e


def shape_from_dict(data: dict) -> ShapeSpec:
    try:
        return _ADAPTER.validate_python(data)
    except ValidationError as e:
        raise ShapeSpecError(f"invalid shape spec: {e.errors()[0]['msg']}") from e


def dump_shape_spec(spec: ShapeSpec) -> str:
    return _ADAPTER.dump_json(spec, indent=2).decode()


def rasterize(
    spec: ShapeSpec, resolution: int, max_resolution: int = MAX_RESOLUTION
) -> VoxelGrid:
    if resolution < 1:
        raise ShapeSpecError(f"resolution must be at least 1, got {resolution}")
    if resolution > max_resolution:
        raise ShapeSpecError(
            f"resolution {resolution} exceeds the limit of {max_resolution}"
        )
    centers = (np.arange(resolution, dtype=np.float64) + 0.5) / resolution
    x = centers[:, None, None]
    y = centers[None, :, None]
    z = centers[None, None, :]
    inside = np.broadcast_to(spec.contains(x, y, z), (resolution,) * 3)
    return VoxelGrid(np.array(inside, dtype=bool))


def random_shape(
    rng: np.random.Generator,
    max_children: int = 3,
    kinds: tuple[str, ...] = ("box", "sphere", "ellipsoid"),
    difference_rate: float = 0.25,
) -> ShapeSpec:
    """Union of a few random primitives, sometimes with a bite taken out."""
    count = int(rng.integers(1, max_children + 1))
    children = [_random_primitive(rng, kinds) for _ in range(count)]
    shape: ShapeSpec = children[0] if count == 1 else UnionShape(children=children)
    if rng.random() < difference_rate:
        shape = Difference(base=shape, subtract=_random_primitive(rng, kinds))
    return shape


def _random_primitive(rng: np.random.Generator, kinds: tuple[str, ...]) -> ShapeSpec:
    kind = kinds[int(rng.integers(len(kinds)))]
    match kind:
        case "box":
            lo = rng.uniform(0.05, 0.5, size=3)
            hi = np.minimum(lo + rng.uniform(0.15, 0.5, size=3), 0.95)
            return Box(lo=tuple(lo), hi=tuple(hi))
        case "sphere":
            radius = float(rng.uniform(0.1, 0.35))
            center = rng.uniform(radius + 0.02, 0.98 - radius, size=3)
            return Sphere(center=tuple(center), radius=radius)
        case "ellipsoid":
            radii = rng.uniform(0.08, 0.35, size=3)
            center = rng.uniform(radii + 0.02, 0.98 - radii)
            return Ellipsoid(center=tuple(center), radii=tuple(radii))
        case _:
            raise ShapeSpecError(f"unknown primitive kind {kind!r}")
