from mvd_sr.predictor.checkpoint import decode_model, encode_model, load_model, save_model
from mvd_sr.predictor.model import (
    Gradient,
    Pair,
    PredictorModel,
    compose,
    constrained_depth,
    depth_loss,
    gradient,
    init_model,
    loss_depth,
    loss_sil,
    predict_depth,
    predict_sil,
    silhouette_loss,
    total_variation,
)
from mvd_sr.predictor.network import (
    LayerKind,
    LayerSpec,
    default_architecture,
    param_count,
)
from mvd_sr.predictor.training import StepLoss, smoothed, train
from mvd_sr.predictor.variants import (
    BaselinePredictor,
    LearnedPredictor,
    OraclePredictor,
    Predictor,
    PredictorKind,
    make_predictor,
    predict_set,
)

__all__ = [
    "BaselinePredictor",
    "Gradient",
    "LayerKind",
    "LayerSpec",
    "LearnedPredictor",
    "OraclePredictor",
    "Pair",
    "Predictor",
    "PredictorKind",
    "PredictorModel",
    "StepLoss",
    "compose",
    "constrained_depth",
    "decode_model",
    "default_architecture",
    "depth_loss",
    "encode_model",
    "gradient",
    "init_model",
    "load_model",
    "loss_depth",
    "loss_sil",
    "make_predictor",
    "param_count",
    "predict_depth",
    "predict_set",
    "predict_sil",
    "save_model",
    "silhouette_loss",
    "smoothed",
    "total_variation",
    "train",
]
