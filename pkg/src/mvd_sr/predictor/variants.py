"""Interchangeable high resolution ODM predictors.

``baseline`` is plain nearest-neighbour up-sampling, ``oracle`` hands back
known ground truth, ``mvd`` runs both networks. ``silhouette`` and ``depth``
are the single-network ablations: each replaces the other network's output
with its nearest-neighbour counterpart.
"""

from dataclasses import dataclass
from typing import Protocol

import torch
from strenum import StrEnum

from mvd_sr.errors import ContractError, ResolutionMismatchError
from mvd_sr.odm.maps import OdmSet, upsample_set_nn
from mvd_sr.predictor.model import (
    PredictorModel,
    compose,
    depth_forward,
    encode_inputs,
    sil_forward,
    upsampled_base,
)


class PredictorKind(StrEnum):
    BASELINE = "baseline"
    ORACLE = "oracle"
    DEPTH = "depth"
    SILHOUETTE = "silhouette"
    MVD = "mvd"


class Predictor(Protocol):
    kind: PredictorKind
    factor: int

    def predict_set(self, odms_low: OdmSet) -> OdmSet: ...


@dataclass(frozen=True)
class BaselinePredictor:
    factor: int
    kind: PredictorKind = PredictorKind.BASELINE

    def predict_set(self, odms_low: OdmSet) -> OdmSet:
        return upsample_set_nn(odms_low, self.factor)


@dataclass(frozen=True)
class OraclePredictor:
    truth: OdmSet
    factor: int
    kind: PredictorKind = PredictorKind.ORACLE

    def predict_set(self, odms_low: OdmSet) -> OdmSet:
        expected = odms_low.resolution * self.factor
        if self.truth.resolution != expected:
            raise ResolutionMismatchError(expected, self.truth.resolution, what="ODM")
        return self.truth


@dataclass(frozen=True)
class LearnedPredictor:
    model: PredictorModel
    threshold: float = 0.5
    kind: PredictorKind = PredictorKind.MVD

    @property
    def factor(self) -> int:
        return self.model.factor

    def predict_set(self, odms_low: OdmSet) -> OdmSet:
        lows = list(odms_low)
        base = upsampled_base(lows, self.factor)
        # the six views run as one batch through each network
        with torch.no_grad():
            inputs = encode_inputs(lows)
            if self.kind == PredictorKind.DEPTH:
                sil = (base != 0).to(torch.float64)
            else:
                sil = sil_forward(self.model.sil_network, inputs)
            if self.kind == PredictorKind.SILHOUETTE:
                c_h = base
            else:
                c_h = depth_forward(
                    self.model.depth_network, inputs, base, self.model.range_r
                )
        return OdmSet(
            {
                odm.view: compose(
                    sil[i].numpy(), c_h[i].numpy(), self.threshold, odm.view
                )
                for i, odm in enumerate(lows)
            }
        )


def make_predictor(
    kind: PredictorKind,
    factor: int,
    model: PredictorModel | None = None,
    truth: OdmSet | None = None,
    threshold: float = 0.5,
) -> Predictor:
    match PredictorKind(kind):
        case PredictorKind.BASELINE:
            return BaselinePredictor(factor)
        case PredictorKind.ORACLE:
            if truth is None:
                raise ContractError("the oracle predictor needs ground-truth ODMs")
            return OraclePredictor(truth, factor)
        case learned:
            if model is None:
                raise ContractError(f"the {learned} predictor needs a model")
            if model.factor != factor:
                raise ContractError(
                    f"model factor {model.factor} does not match requested {factor}"
                )
            return LearnedPredictor(model, threshold, learned)


def predict_set(predictor: Predictor, odms_low: OdmSet) -> OdmSet:
    return predictor.predict_set(odms_low)
