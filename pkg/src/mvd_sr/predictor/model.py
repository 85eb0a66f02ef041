"""The decomposed ODM super-resolution predictor.

``f_sil`` maps a low resolution ODM to a per-pixel occupancy probability at
``factor`` times the resolution. ``f_depth`` predicts a residual squashed by a
sigmoid into ``[0, range_r]`` on top of the nearest-neighbour up-sampled map,
which bounds the constrained depth between ``g(D_L)`` and ``g(D_L) + r``.
"""

import dataclasses
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np
import torch
from torch import nn

from mvd_sr.errors import ContractError
from mvd_sr.odm.maps import Odm, upsample_odm_nn
from mvd_sr.odm.views import ViewId
from mvd_sr.predictor.network import (
    Architecture,
    build_network,
    default_architecture,
    init_vector,
    load_vector,
    param_count,
    validate_architecture,
)

Pair = tuple[Odm, Odm]


@dataclass(frozen=True, eq=False)
class PredictorModel:
    factor: int
    range_r: float
    lambda_tv: float
    architecture: Architecture
    sil_params: np.ndarray
    depth_params: np.ndarray

    def __post_init__(self) -> None:
        if self.factor < 1:
            raise ContractError(f"factor must be at least 1, got {self.factor}")
        if not self.range_r > 0:
            raise ContractError(f"range r must be positive, got {self.range_r}")
        if not self.lambda_tv >= 0:
            raise ContractError(f"lambda must be non-negative, got {self.lambda_tv}")
        try:
            validate_architecture(self.architecture, self.factor)
        except ValueError as e:
            raise ContractError(str(e)) from e
        expected = param_count(self.architecture)
        for name in ("sil_params", "depth_params"):
            params = np.array(getattr(self, name), dtype=np.float64)
            if params.shape != (expected,):
                raise ContractError(f"{name} has {params.size} values, expected {expected}")
            if not np.all(np.isfinite(params)):
                raise ContractError(f"{name} holds non-finite values")
            params.setflags(write=False)
            object.__setattr__(self, name, params)
        object.__setattr__(self, "architecture", tuple(self.architecture))

    @cached_property
    def sil_network(self) -> nn.Sequential:
        return load_vector(build_network(self.architecture), self.sil_params).eval()

    @cached_property
    def depth_network(self) -> nn.Sequential:
        return load_vector(build_network(self.architecture), self.depth_params).eval()

    @property
    def param_count(self) -> int:
        return self.sil_params.size + self.depth_params.size

    def with_params(
        self, sil_params: Optional[np.ndarray] = None, depth_params: Optional[np.ndarray] = None
    ) -> "PredictorModel":
        return dataclasses.replace(
            self,
            sil_params=self.sil_params if sil_params is None else sil_params,
            depth_params=self.depth_params if depth_params is None else depth_params,
        )


def init_model(
    factor: int,
    channels: int = 8,
    conv_layers: int = 3,
    range_r: Optional[float] = None,
    lambda_tv: float = 0.1,
    seed: int = 0,
    zero_final: bool = True,
) -> PredictorModel:
    architecture = default_architecture(factor, channels, conv_layers)
    return PredictorModel(
        factor=factor,
        range_r=float(factor if range_r is None else range_r),
        lambda_tv=float(lambda_tv),
        architecture=architecture,
        sil_params=init_vector(architecture, np.random.default_rng([seed, 0]), zero_final),
        depth_params=init_vector(architecture, np.random.default_rng([seed, 1]), zero_final),
    )


def encode_inputs(odms_low: Sequence[Odm]) -> torch.Tensor:
    """Stacks ODMs into ``(B, 2, R, R)``: depth / R and the constant view channel."""
    resolutions = {odm.resolution for odm in odms_low}
    if len(resolutions) != 1:
        raise ContractError(f"mixed input resolutions {sorted(resolutions)}")
    size = resolutions.pop()
    x = np.empty((len(odms_low), 2, size, size))
    for i, odm in enumerate(odms_low):
        x[i, 0] = odm.depth / size
        x[i, 1] = odm.view.side_value
    return torch.from_numpy(x)


def upsampled_base(odms_low: Sequence[Odm], factor: int) -> torch.Tensor:
    base = np.stack([upsample_odm_nn(odm, factor).depth for odm in odms_low])
    return torch.from_numpy(base.astype(np.float64))


def depth_targets(odms_high: Sequence[Odm]) -> torch.Tensor:
    return torch.from_numpy(np.stack([odm.depth for odm in odms_high]).astype(np.float64))


def constrained_depth(raw: torch.Tensor, base: torch.Tensor, range_r: float) -> torch.Tensor:
    return range_r * torch.sigmoid(raw) + base


def sil_forward(network: nn.Module, x: torch.Tensor) -> torch.Tensor:
    return torch.sigmoid(network(x)[:, 0])


def depth_forward(
    network: nn.Module, x: torch.Tensor, base: torch.Tensor, range_r: float
) -> torch.Tensor:
    return constrained_depth(network(x)[:, 0], base, range_r)


def predict_sil(model: PredictorModel, odm_low: Odm) -> np.ndarray:
    with torch.no_grad():
        prob = sil_forward(model.sil_network, encode_inputs([odm_low]))
    return prob[0].numpy()


def predict_depth(model: PredictorModel, odm_low: Odm) -> np.ndarray:
    with torch.no_grad():
        c_h = depth_forward(
            model.depth_network,
            encode_inputs([odm_low]),
            upsampled_base([odm_low], model.factor),
            model.range_r,
        )
    return c_h[0].numpy()


def compose(
    sil_prob: np.ndarray,
    c_h: np.ndarray,
    threshold: float = 0.5,
    view: ViewId = ViewId.X_POS,
) -> Odm:
    """Masks the rounded constrained depth by the binarized silhouette."""
    sil_prob = np.asarray(sil_prob, dtype=np.float64)
    c_h = np.asarray(c_h, dtype=np.float64)
    if sil_prob.shape != c_h.shape:
        raise ContractError(f"silhouette {sil_prob.shape} and depth {c_h.shape} differ")
    if not 0 < threshold < 1:
        raise ContractError(f"threshold must lie in (0, 1), got {threshold}")
    size = c_h.shape[0]
    # round half away from zero
    rounded = np.sign(c_h) * np.floor(np.abs(c_h) + 0.5)
    depth = np.clip(rounded, 1, size).astype(np.int64)
    return Odm(view, np.where(sil_prob >= threshold, depth, 0))


def total_variation(x: torch.Tensor) -> torch.Tensor:
    """Sum of forward-difference magnitudes over the last two axes.

    Only indices with both a right and a lower neighbour contribute. The
    gradient of a zero magnitude is taken as zero.
    """
    corner = x[..., :-1, :-1]
    du = x[..., 1:, :-1] - corner
    dv = x[..., :-1, 1:] - corner
    squared = du**2 + dv**2
    nonzero = squared > 0
    safe = torch.where(nonzero, squared, torch.ones_like(squared))
    return torch.where(nonzero, torch.sqrt(safe), torch.zeros_like(squared)).sum()


def silhouette_loss(sil_prob: torch.Tensor, target_depth: torch.Tensor) -> torch.Tensor:
    return ((sil_prob - (target_depth != 0).to(sil_prob.dtype)) ** 2).sum()


def depth_loss(c_h: torch.Tensor, target_depth: torch.Tensor, lambda_tv: float) -> torch.Tensor:
    # ground-truth masking happens in training only
    mask = (target_depth != 0).to(c_h.dtype)
    return ((c_h * mask - target_depth) ** 2).sum() + lambda_tv * total_variation(c_h)


def check_pairs(model: PredictorModel, pairs: Sequence[Pair]) -> None:
    for low, high in pairs:
        if high.resolution != low.resolution * model.factor:
            raise ContractError(
                f"pair resolutions {low.resolution} -> {high.resolution} "
                f"do not match factor {model.factor}"
            )
        if low.view != high.view:
            raise ContractError(f"pair mixes views {low.view} and {high.view}")


class BatchTensors(NamedTuple):
    inputs: torch.Tensor
    base: torch.Tensor
    targets: torch.Tensor


def batch_tensors(model: PredictorModel, pairs: Sequence[Pair]) -> BatchTensors:
    check_pairs(model, pairs)
    lows = [low for low, _ in pairs]
    return BatchTensors(
        encode_inputs(lows),
        upsampled_base(lows, model.factor),
        depth_targets([high for _, high in pairs]),
    )


def loss_sil(model: PredictorModel, odm_low: Odm, odm_high_gt: Odm) -> float:
    inputs, _, targets = batch_tensors(model, [(odm_low, odm_high_gt)])
    with torch.no_grad():
        return float(silhouette_loss(sil_forward(model.sil_network, inputs), targets))


def loss_depth(model: PredictorModel, odm_low: Odm, odm_high_gt: Odm) -> float:
    inputs, base, targets = batch_tensors(model, [(odm_low, odm_high_gt)])
    with torch.no_grad():
        c_h = depth_forward(model.depth_network, inputs, base, model.range_r)
        return float(depth_loss(c_h, targets, model.lambda_tv))


class Gradient(NamedTuple):
    sil: np.ndarray
    depth: np.ndarray


def gradient(model: PredictorModel, batch: Sequence[Pair]) -> Gradient:
    """Reverse-mode gradients of the summed batch losses, one vector per network."""
    inputs, base, targets = batch_tensors(model, batch)
    sil_net = load_vector(build_network(model.architecture), model.sil_params)
    depth_net = load_vector(build_network(model.architecture), model.depth_params)

    sil = silhouette_loss(sil_forward(sil_net, inputs), targets)
    sil_grads = torch.autograd.grad(sil, list(sil_net.parameters()))
    c_h = depth_forward(depth_net, inputs, base, model.range_r)
    depth = depth_loss(c_h, targets, model.lambda_tv)
    depth_grads = torch.autograd.grad(depth, list(depth_net.parameters()))

    return Gradient(
        nn.utils.parameters_to_vector(sil_grads).numpy().copy(),
        nn.utils.parameters_to_vector(depth_grads).numpy().copy(),
    )
