import logging
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import numpy as np
import torch
from tqdm import tqdm

from mvd_sr.config import TrainConfig
from mvd_sr.errors import ContractError, TrainingError
from mvd_sr.predictor.model import (
    Pair,
    PredictorModel,
    batch_tensors,
    check_pairs,
    depth_forward,
    depth_loss,
    sil_forward,
    silhouette_loss,
)
from mvd_sr.predictor.network import build_network, load_vector, network_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepLoss:
    """Per-pixel mean losses of one optimisation step."""

    step: int
    loss_sil: float
    loss_depth: float


def check_dataset(model: PredictorModel, dataset: Sequence[Pair]) -> None:
    if not dataset:
        raise TrainingError("empty dataset")
    resolutions = {low.resolution for low, _ in dataset}
    if len(resolutions) != 1:
        raise TrainingError(f"mixed low resolutions {sorted(resolutions)}")
    try:
        check_pairs(model, dataset)
    except ContractError as e:
        raise TrainingError(str(e)) from e


def batch_indices(
    rng: np.random.Generator, count: int, batch_size: int
) -> Iterator[np.ndarray]:
    """Endless full batches drawn from back-to-back permutations of the data."""
    order = rng.permutation(count)
    cursor = 0
    while True:
        while cursor + batch_size > len(order):
            order = np.concatenate((order[cursor:], rng.permutation(count)))
            cursor = 0
        yield order[cursor : cursor + batch_size]
        cursor += batch_size


def train(
    model: PredictorModel,
    dataset: Sequence[Pair],
    config: TrainConfig,
    on_step: Optional[Callable[[StepLoss], None]] = None,
    progress: bool = False,
) -> PredictorModel:
    """Mini-batch SGD with a fixed step size on both networks independently.

    Each step draws one batch and updates the silhouette network on its
    loss and the depth network on its own. The optimised objective is the
    summed loss divided by batch size and pixel count, so one step size
    works across resolutions.
    """
    check_dataset(model, dataset)
    if config.steps == 0:
        return model

    data = batch_tensors(model, dataset)
    pixels = data.targets.shape[1] * data.targets.shape[2]
    rng = np.random.default_rng(config.seed)

    sil_net = load_vector(build_network(model.architecture), model.sil_params)
    depth_net = load_vector(build_network(model.architecture), model.depth_params)
    sil_opt = torch.optim.SGD(sil_net.parameters(), lr=config.learning_rate)
    depth_opt = torch.optim.SGD(depth_net.parameters(), lr=config.learning_rate)

    batches = batch_indices(rng, len(dataset), config.batch_size)
    steps = tqdm(
        range(config.steps), desc="train", unit="step", disable=not progress
    )
    for step, batch in zip(steps, batches):
        index = torch.from_numpy(batch)
        inputs, base, targets = (t[index] for t in data)
        scale = len(index) * pixels

        sil_opt.zero_grad()
        sil_loss = silhouette_loss(sil_forward(sil_net, inputs), targets) / scale
        depth_opt.zero_grad()
        c_h = depth_forward(depth_net, inputs, base, model.range_r)
        depth = depth_loss(c_h, targets, model.lambda_tv) / scale
        if not (torch.isfinite(sil_loss) and torch.isfinite(depth)):
            raise TrainingError("loss diverged", step)
        sil_loss.backward()
        depth.backward()
        sil_opt.step()
        depth_opt.step()

        record = StepLoss(step, float(sil_loss), float(depth))
        if on_step is not None:
            on_step(record)
        if step % config.log_every == 0:
            logger.debug(
                "step %d loss_sil=%.6f loss_depth=%.6f",
                step,
                record.loss_sil,
                record.loss_depth,
            )
            steps.set_postfix(
                sil=f"{record.loss_sil:.4f}", depth=f"{record.loss_depth:.4f}"
            )

    sil_params, depth_params = network_vector(sil_net), network_vector(depth_net)
    if not (np.isfinite(sil_params).all() and np.isfinite(depth_params).all()):
        raise TrainingError("parameters diverged", config.steps - 1)
    return model.with_params(sil_params, depth_params)


def smoothed(history: Sequence[float], window: int = 50) -> np.ndarray:
    """Trailing moving average, used to judge whether training loss keeps falling."""
    values = np.asarray(history, dtype=np.float64)
    if values.size < window:
        return values.copy()
    kernel = np.ones(window) / window
    return np.convolve(values, kernel, mode="valid")
