"""MVDM model checkpoints.

Layout (little-endian): magic ``MVDM``, version u16, factor u32, range_r f64,
lambda f64, layer count u32, per layer kind u8 / in u32 / out u32 / kernel
u32, then the silhouette parameters and the depth parameters as f64 arrays,
each in layer order (weights then bias per convolution). The descriptor is
shared by both networks and written once.
"""

import os
import struct

import numpy as np

from mvd_sr.errors import ContractError, FormatError
from mvd_sr.predictor.model import PredictorModel
from mvd_sr.predictor.network import LayerKind, LayerSpec, param_count

MAGIC = b"MVDM"
VERSION = 1
HEADER = struct.Struct("<4sHIddI")
LAYER = struct.Struct("<BIII")


def encode_model(model: PredictorModel) -> bytes:
    parts = [
        HEADER.pack(
            MAGIC,
            VERSION,
            model.factor,
            model.range_r,
            model.lambda_tv,
            len(model.architecture),
        )
    ]
    for layer in model.architecture:
        parts.append(
            LAYER.pack(
                int(layer.kind), layer.in_channels, layer.out_channels, layer.kernel
            )
        )
    parts.append(model.sil_params.astype("<f8").tobytes())
    parts.append(model.depth_params.astype("<f8").tobytes())
    return b"".join(parts)


def decode_model(data: bytes) -> PredictorModel:
    if len(data) < HEADER.size:
        raise FormatError("truncated header", len(data))
    magic, version, factor, range_r, lambda_tv, layers = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", 4)

    offset = HEADER.size
    architecture = []
    for _ in range(layers):
        if len(data) < offset + LAYER.size:
            raise FormatError("truncated layer descriptor", len(data))
        kind, in_channels, out_channels, kernel = LAYER.unpack_from(data, offset)
        if kind not in {member.value for member in LayerKind}:
            raise FormatError(f"unknown layer kind {kind}", offset)
        architecture.append(
            LayerSpec(LayerKind(kind), in_channels, out_channels, kernel)
        )
        offset += LAYER.size

    count = param_count(architecture)
    expected = offset + 2 * 8 * count
    if len(data) != expected:
        raise FormatError(f"expected {2 * count} parameters", min(len(data), expected))
    params = np.frombuffer(data, dtype="<f8", offset=offset).astype(np.float64)
    try:
        return PredictorModel(
            factor=factor,
            range_r=range_r,
            lambda_tv=lambda_tv,
            architecture=tuple(architecture),
            sil_params=params[:count],
            depth_params=params[count:],
        )
    except ContractError as e:
        raise FormatError(f"inconsistent model: {e}", HEADER.size) from e


def save_model(path: os.PathLike, model: PredictorModel) -> None:
    with open(path, "wb") as f:
        f.write(encode_model(model))


def load_model(path: os.PathLike) -> PredictorModel:
    with open(path, "rb") as f:
        return decode_model(f.read())
