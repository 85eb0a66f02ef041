"""IoU table over the predictor variants, the way super-resolution results are
compared: nearest-neighbour baseline, each network on its own, both networks,
and ground-truth ODMs as the upper bound."""

import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from mvd_sr.carving import carve
from mvd_sr.config import CarveConfig, PredictConfig
from mvd_sr.dataset import Sample
from mvd_sr.errors import TrainingError
from mvd_sr.metrics.iou import iou
from mvd_sr.odm.maps import extract_all
from mvd_sr.predictor.model import PredictorModel
from mvd_sr.predictor.variants import PredictorKind, make_predictor
from mvd_sr.strings import get_string

logger = logging.getLogger(__name__)

LEARNED = (PredictorKind.DEPTH, PredictorKind.SILHOUETTE, PredictorKind.MVD)


@dataclass(frozen=True)
class AblationTable:
    """Mean IoU in percent per predictor variant."""

    scores: dict[PredictorKind, float]
    count: int
    per_sample: dict[PredictorKind, list[float]] = field(default_factory=dict)

    def __getitem__(self, kind: PredictorKind) -> float:
        return self.scores[PredictorKind(kind)]

    def to_pairs(self) -> list[tuple[str, str]]:
        pairs = [(kind.value, f"{score:.2f}") for kind, score in self.scores.items()]
        return pairs + [("objects", str(self.count))]

    def csv_rows(self, category: str, seed: Optional[int] = None) -> Iterator[tuple]:
        for kind, score in self.scores.items():
            yield (
                category,
                f"iou_{kind.value}",
                f"{score:.6g}",
                self.count,
                "" if seed is None else str(seed),
            )


def run_ablation(
    samples: Sequence[Sample],
    model: Optional[PredictorModel],
    carve_config: CarveConfig,
    predict_config: PredictConfig = PredictConfig(),
) -> AblationTable:
    """Carves every sample once per variant and scores it against its truth.

    Without a model only the baseline and oracle rows are produced.
    """
    if not samples:
        raise TrainingError(get_string("empty_dataset"))
    kinds = [PredictorKind.BASELINE]
    if model is not None:
        kinds += LEARNED
    kinds.append(PredictorKind.ORACLE)

    per_sample: dict[PredictorKind, list[float]] = {kind: [] for kind in kinds}
    for sample in samples:
        odms_low = extract_all(sample.low)
        truth = extract_all(sample.high)
        for kind in kinds:
            predictor = make_predictor(
                kind,
                carve_config.factor,
                model=model,
                truth=truth,
                threshold=predict_config.sil_threshold,
            )
            carved = carve(sample.low, predictor.predict_set(odms_low), carve_config)
            per_sample[kind].append(iou(carved, sample.high))
        logger.debug(
            "%s: %s",
            sample.name,
            " ".join(f"{k.value}={v[-1]:.3f}" for k, v in per_sample.items()),
        )

    scores = {kind: 100.0 * float(np.mean(v)) for kind, v in per_sample.items()}
    return AblationTable(scores, len(samples), per_sample)
