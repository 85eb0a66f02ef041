import itertools

import numpy as np
import pytest
import torch

from conftest import random_grid
from mvd_sr.errors import ContractError, ResolutionMismatchError
from mvd_sr.odm import Odm, ViewId, extract_all, extract_odm, upsample_odm_nn
from mvd_sr.odm.maps import upsample_set_nn
from mvd_sr.predictor import (
    BaselinePredictor,
    LayerKind,
    LearnedPredictor,
    OraclePredictor,
    PredictorKind,
    PredictorModel,
    compose,
    constrained_depth,
    default_architecture,
    depth_loss,
    init_model,
    loss_depth,
    loss_sil,
    make_predictor,
    param_count,
    predict_depth,
    predict_set,
    predict_sil,
    silhouette_loss,
    total_variation,
)
from mvd_sr.predictor.model import encode_inputs
from mvd_sr.voxel import VoxelGrid, downsample_any


def naive_tv(x: np.ndarray) -> float:
    total = 0.0
    for i in range(x.shape[0] - 1):
        for j in range(x.shape[1] - 1):
            dx, dy = x[i + 1, j] - x[i, j], x[i, j + 1] - x[i, j]
            total += np.sqrt(dx**2 + dy**2)
    return total


@pytest.fixture
def pair(rng):
    high = random_grid(rng, 8, 0.3)
    low = downsample_any(high, 2)
    return extract_odm(low, ViewId.Y_POS), extract_odm(high, ViewId.Y_POS)


def scrambled(model: PredictorModel, rng, scale: float = 1.0) -> PredictorModel:
    return model.with_params(
        rng.normal(0, scale, model.sil_params.size),
        rng.normal(0, scale, model.depth_params.size),
    )


def test_default_architecture():
    architecture = default_architecture(2, channels=8, conv_layers=3)
    kinds = [layer.kind for layer in architecture]
    assert kinds == [
        LayerKind.CONV,
        LayerKind.RELU,
        LayerKind.CONV,
        LayerKind.RELU,
        LayerKind.CONV,
        LayerKind.PIXEL_SHUFFLE,
    ]
    expected = (2 * 8 * 9 + 8) + (8 * 8 * 9 + 8) + (8 * 4 * 9 + 4)
    assert param_count(architecture) == expected


def test_model_rejects_bad_parts():
    model = init_model(2)
    with pytest.raises(ContractError):
        model.with_params(sil_params=np.zeros(3))
    with pytest.raises(ContractError):
        model.with_params(depth_params=np.full(model.depth_params.size, np.nan))
    with pytest.raises(ContractError):
        PredictorModel(
            factor=3,
            range_r=1.0,
            lambda_tv=0.1,
            architecture=model.architecture,
            sil_params=model.sil_params,
            depth_params=model.depth_params,
        )


def test_side_channel_carries_the_view():
    odms = list(extract_all(VoxelGrid.full(3)))
    x = encode_inputs(odms).numpy()
    assert x.shape == (6, 2, 3, 3)
    for i, odm in enumerate(odms):
        assert np.all(x[i, 1] == i / 5)
        assert np.allclose(x[i, 0], 1 / 3)


def test_zero_final_layer_predicts_the_midpoints(pair):
    low, _ = pair
    model = init_model(2, range_r=3.0)
    assert np.array_equal(predict_sil(model, low), np.full((8, 8), 0.5))
    base = upsample_odm_nn(low, 2).depth
    assert np.allclose(predict_depth(model, low), base + 1.5)


def test_constrained_depth_stays_in_range(pair, rng):
    low, _ = pair
    base = upsample_odm_nn(low, 2).depth
    for seed in range(100):
        model = init_model(2, seed=seed, zero_final=False)
        model = scrambled(model, rng, scale=float(rng.uniform(0.1, 3)))
        c_h = predict_depth(model, low)
        assert (c_h >= base).all()
        assert (c_h <= base + model.range_r).all()


def test_constrained_depth_limits():
    base = torch.full((2, 2), 3.0, dtype=torch.float64)
    low = constrained_depth(torch.full((2, 2), -1e3, dtype=torch.float64), base, 2.0)
    high = constrained_depth(torch.full((2, 2), 1e3, dtype=torch.float64), base, 2.0)
    assert torch.allclose(low, base, atol=1e-6)
    assert torch.allclose(high, base + 2.0, atol=1e-6)


def test_compose_masks_and_rounds():
    sil = np.array([[0.2, 0.5], [0.9, 0.7]])
    c_h = np.array([[1.4, 1.5], [0.2, 5.0]])
    odm = compose(sil, c_h, 0.5, ViewId.X_NEG)
    assert odm.view == ViewId.X_NEG
    assert np.array_equal(odm.depth, [[0, 2], [1, 2]])
    assert not compose(np.zeros((2, 2)), c_h).depth.any()


@pytest.mark.parametrize(
    "sil, c_h, threshold",
    [
        (np.zeros((2, 2)), np.zeros((3, 3)), 0.5),
        (np.zeros((2, 2)), np.zeros((2, 2)), 0.0),
        (np.zeros((2, 2)), np.zeros((2, 2)), 1.0),
    ],
)
def test_compose_contract(sil, c_h, threshold):
    with pytest.raises(ContractError):
        compose(sil, c_h, threshold)


def test_total_variation_hand_cases(rng):
    constant = torch.full((4, 4), 2.5, dtype=torch.float64)
    assert float(total_variation(constant)) == 0.0
    x = torch.tensor([[0.0, 1.0], [0.0, 1.0]], dtype=torch.float64)
    assert float(total_variation(x)) == 1.0
    image = rng.normal(size=(4, 4))
    assert float(total_variation(torch.from_numpy(image))) == pytest.approx(
        naive_tv(image)
    )


def test_silhouette_loss_constant_case():
    low = extract_odm(VoxelGrid.full(4), ViewId.X_POS)
    high = extract_odm(VoxelGrid.full(8), ViewId.X_POS)
    assert loss_sil(init_model(2), low, high) == pytest.approx(0.25 * 64)


def test_losses_match_naive_sums(pair, rng):
    low, high = pair
    model = scrambled(init_model(2, lambda_tv=0.3), rng, scale=0.5)
    prob = predict_sil(model, low)
    c_h = predict_depth(model, low)
    truth = high.depth
    naive_sil = 0.0
    naive_depth = 0.0
    for u, v in itertools.product(range(8), repeat=2):
        occupied = float(truth[u, v] != 0)
        naive_sil += (prob[u, v] - occupied) ** 2
        naive_depth += (c_h[u, v] * occupied - truth[u, v]) ** 2
    naive_depth += 0.3 * naive_tv(c_h)
    assert loss_sil(model, low, high) == pytest.approx(naive_sil, rel=1e-12)
    assert loss_depth(model, low, high) == pytest.approx(naive_depth, rel=1e-12)


def test_oracle_losses_are_zero(pair):
    _, high = pair
    target = torch.from_numpy(high.depth.astype(np.float64))
    assert float(silhouette_loss((target != 0).double(), target)) == 0.0
    assert float(depth_loss(target, target, 0.0)) == 0.0


def test_losses_check_pair_resolutions(pair):
    low, high = pair
    with pytest.raises(ContractError):
        loss_sil(init_model(4), low, high)


def test_baseline_and_oracle_predictors(rng):
    high = random_grid(rng, 8, 0.3)
    low = downsample_any(high, 2)
    odms_low, truth = extract_all(low), extract_all(high)
    assert predict_set(BaselinePredictor(2), odms_low) == upsample_set_nn(odms_low, 2)
    assert predict_set(OraclePredictor(truth, 2), odms_low) == truth
    with pytest.raises(ResolutionMismatchError):
        OraclePredictor(truth, 4).predict_set(odms_low)


@pytest.mark.parametrize(
    "kind", [PredictorKind.MVD, PredictorKind.DEPTH, PredictorKind.SILHOUETTE]
)
def test_learned_predictors_produce_valid_sets(rng, kind):
    low = random_grid(rng, 4, 0.4)
    model = scrambled(init_model(3, zero_final=False), rng, scale=0.3)
    predicted = predict_set(LearnedPredictor(model, kind=kind), extract_all(low))
    assert predicted.resolution == 12
    for odm in predicted:
        assert isinstance(odm, Odm)
        assert odm.depth.min() >= 0 and odm.depth.max() <= 12


def test_single_network_variants_fall_back_to_upsampling(rng):
    low = extract_all(random_grid(rng, 4, 0.4))
    base = upsample_set_nn(low, 2)
    model = init_model(2)
    # zero final layer: every probability is 0.5 and every residual r / 2
    silhouette_only = predict_set(LearnedPredictor(model, kind="silhouette"), low)
    depth_only = predict_set(LearnedPredictor(model, kind="depth"), low)
    for view in ViewId:
        reference = base[view].depth
        occupied = reference != 0
        kept = silhouette_only[view].depth[occupied]
        assert np.array_equal(kept, reference[occupied])
        assert np.array_equal(depth_only[view].depth != 0, occupied)
        assert np.array_equal(depth_only[view].depth[occupied], reference[occupied] + 1)


def test_make_predictor_needs_its_inputs():
    with pytest.raises(ContractError):
        make_predictor(PredictorKind.ORACLE, 2)
    with pytest.raises(ContractError):
        make_predictor(PredictorKind.MVD, 2)
    with pytest.raises(ContractError):
        make_predictor(PredictorKind.MVD, 4, model=init_model(2))
    assert make_predictor("baseline", 3).factor == 3
