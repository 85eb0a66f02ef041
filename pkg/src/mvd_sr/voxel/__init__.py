from mvd_sr.voxel.codec import decode, encode, read_grid, write_grid
from mvd_sr.voxel.grid import (
    MAX_RESOLUTION,
    VoxelGrid,
    check_same_resolution,
    downsample_any,
    solidify,
    upsample_nn,
)
from mvd_sr.voxel.shapes import (
    Box,
    Difference,
    Ellipsoid,
    ShapeSpec,
    Sphere,
    UnionShape,
    dump_shape_spec,
    load_shape_spec,
    random_shape,
    rasterize,
    shape_from_dict,
)

__all__ = [
    "MAX_RESOLUTION",
    "Box",
    "Difference",
    "Ellipsoid",
    "ShapeSpec",
    "Sphere",
    "UnionShape",
    "VoxelGrid",
    "check_same_resolution",
    "decode",
    "downsample_any",
    "dump_shape_spec",
    "encode",
    "load_shape_spec",
    "random_shape",
    "rasterize",
    "read_grid",
    "shape_from_dict",
    "solidify",
    "upsample_nn",
    "write_grid",
]
