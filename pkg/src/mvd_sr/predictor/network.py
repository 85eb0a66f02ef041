"""Layer descriptors and the small convolutional networks built from them.

Both predictor networks share one descriptor: 3x3 convolutions with
rectified-linear activations on a 2 channel input (normalized depth and the
view side channel), a last convolution producing ``factor**2`` channels and
a sub-pixel shuffle to one channel at ``factor`` times the resolution.
"""

from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence

import numpy as np
import torch
from torch import nn

INPUT_CHANNELS = 2


class LayerKind(IntEnum):
    CONV = 0
    RELU = 1
    PIXEL_SHUFFLE = 2


@dataclass(frozen=True)
class LayerSpec:
    kind: LayerKind
    in_channels: int
    out_channels: int
    kernel: int

    @property
    def param_count(self) -> int:
        if self.kind != LayerKind.CONV:
            return 0
        weights = self.out_channels * self.in_channels * self.kernel**2
        return weights + self.out_channels


Architecture = tuple[LayerSpec, ...]


def conv(in_channels: int, out_channels: int, kernel: int = 3) -> LayerSpec:
    return LayerSpec(LayerKind.CONV, in_channels, out_channels, kernel)


def relu(channels: int) -> LayerSpec:
    return LayerSpec(LayerKind.RELU, channels, channels, 0)


def pixel_shuffle(factor: int) -> LayerSpec:
    return LayerSpec(LayerKind.PIXEL_SHUFFLE, factor**2, 1, factor)


def default_architecture(factor: int, channels: int = 8, conv_layers: int = 3) -> Architecture:
    layers = [conv(INPUT_CHANNELS, channels), relu(channels)]
    for _ in range(conv_layers - 2):
        layers += [conv(channels, channels), relu(channels)]
    layers += [conv(channels, factor**2), pixel_shuffle(factor)]
    return tuple(layers)


def validate_architecture(architecture: Sequence[LayerSpec], factor: int) -> None:
    if not architecture:
        raise ValueError("architecture has no layers")
    channels = INPUT_CHANNELS
    scale = 1
    for number, layer in enumerate(architecture):
        if layer.in_channels != channels:
            raise ValueError(
                f"layer {number} expects {layer.in_channels} channels, gets {channels}"
            )
        match layer.kind:
            case LayerKind.CONV:
                if layer.kernel < 1 or layer.kernel % 2 == 0:
                    raise ValueError(f"layer {number}: kernel must be odd")
            case LayerKind.RELU:
                if layer.out_channels != layer.in_channels:
                    raise ValueError(f"layer {number}: activation changes channels")
            case LayerKind.PIXEL_SHUFFLE:
                if layer.in_channels != layer.out_channels * layer.kernel**2:
                    raise ValueError(f"layer {number}: shuffle channels mismatch")
                scale *= layer.kernel
        channels = layer.out_channels
    if channels != 1 or scale != factor:
        raise ValueError(
            f"architecture maps to {channels} channels at x{scale}, need 1 at x{factor}"
        )


def param_count(architecture: Sequence[LayerSpec]) -> int:
    return sum(layer.param_count for layer in architecture)


def build_network(architecture: Sequence[LayerSpec]) -> nn.Sequential:
    modules: list[nn.Module] = []
    for layer in architecture:
        match layer.kind:
            case LayerKind.CONV:
                modules.append(
                    nn.Conv2d(
                        layer.in_channels,
                        layer.out_channels,
                        layer.kernel,
                        padding=layer.kernel // 2,
                    )
                )
            case LayerKind.RELU:
                modules.append(nn.ReLU())
            case LayerKind.PIXEL_SHUFFLE:
                modules.append(nn.PixelShuffle(layer.kernel))
    return nn.Sequential(*modules).double()


def load_vector(network: nn.Module, vector: np.ndarray) -> nn.Module:
    with torch.no_grad():
        nn.utils.vector_to_parameters(
            torch.as_tensor(vector, dtype=torch.float64), network.parameters()
        )
    return network


def network_vector(network: nn.Module) -> np.ndarray:
    vector = nn.utils.parameters_to_vector(network.parameters())
    return vector.detach().cpu().numpy().astype(np.float64, copy=True)


def init_vector(
    architecture: Sequence[LayerSpec], rng: np.random.Generator, zero_final: bool = True
) -> np.ndarray:
    """He-normal weights, zero biases; optionally a zero final convolution."""
    convs = [layer for layer in architecture if layer.kind == LayerKind.CONV]
    chunks = []
    for number, layer in enumerate(convs):
        shape = (layer.out_channels, layer.in_channels, layer.kernel, layer.kernel)
        fan_in = layer.in_channels * layer.kernel**2
        weights = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)
        if zero_final and number == len(convs) - 1:
            weights = np.zeros(shape)
        chunks += [weights.ravel(), np.zeros(layer.out_channels)]
    return np.concatenate(chunks).astype(np.float64)
