"""Scaled-down end-to-end experiments. Run with ``pytest -m slow``."""

import time

import numpy as np
import pytest

from conftest import box_grid, random_grid
from mvd_sr.ablation import run_ablation
from mvd_sr.carving import carve, detail_carve, structure_carve
from mvd_sr.config import CarveConfig, TrainConfig
from mvd_sr.dataset import generate_dataset, load_pairs, load_samples
from mvd_sr.metrics import iou
from mvd_sr.odm import ViewId, extract_all, extract_odm, silhouette, upsample_odm_nn
from mvd_sr.predictor import (
    PredictorKind,
    init_model,
    make_predictor,
    predict_sil,
    smoothed,
    train,
)
from mvd_sr.voxel import (
    Sphere,
    VoxelGrid,
    downsample_any,
    rasterize,
    solidify,
    upsample_nn,
)

pytestmark = pytest.mark.slow

# mini-batch noise left in a window mean, relative to the first window
LOSS_NOISE = 0.05


def _random_box(rng, resolution, axis=None, below=None):
    lo = rng.integers(0, resolution - 2, size=3)
    hi = np.minimum(lo + rng.integers(2, resolution // 2, size=3), resolution)
    if axis is not None:
        # keep the box strictly on one side of a cut along ``axis``
        lo[axis], hi[axis] = below
    return lo, hi


def _box_union(rng, resolution):
    axis = int(rng.integers(3))
    cut = int(rng.integers(4, resolution - 4))
    first = _random_box(rng, resolution, axis, (int(rng.integers(0, cut - 2)), cut))
    second = _random_box(
        rng, resolution, axis, (cut + 1, int(rng.integers(cut + 2, resolution + 1)))
    )
    occupancy = box_grid(resolution, *first).occupancy
    return occupancy | box_grid(resolution, *second).occupancy


def test_oracle_carving_is_exact_on_boxes(rng):
    start = time.perf_counter()
    config = CarveConfig(factor=4, smoothing_radius=0)
    for case in range(50):
        if case % 2:
            truth = box_grid(32, *_random_box(rng, 32))
        else:
            truth = VoxelGrid(_box_union(rng, 32))
        low = downsample_any(truth, 4)
        odms = make_predictor(PredictorKind.ORACLE, 4, truth=extract_all(truth))
        carved = carve(low, odms.predict_set(extract_all(low)), config)
        assert iou(carved, truth) == 1.0
    assert time.perf_counter() - start < 10


def test_carving_invariants_on_random_inputs(rng):
    for _ in range(200):
        resolution = int(rng.integers(2, 6))
        factor = int(rng.integers(2, 4))
        size = resolution * factor
        low = random_grid(rng, resolution, rng.uniform(0.2, 0.8))
        odms = extract_all(random_grid(rng, size, rng.uniform(0.1, 0.6)))
        radius = int(rng.integers(0, 3))
        upsampled = upsample_nn(low, factor)

        previous = None
        for votes in range(1, 7):
            config = CarveConfig(
                factor=factor, smoothing_radius=radius, agreement_votes=votes
            )
            carved = carve(low, odms, config)
            assert carved.is_subset_of(upsampled)
            if previous is not None:
                assert previous.is_subset_of(carved)
            previous = carved

            structured = structure_carve(upsampled, odms.silhouettes(), config)
            assert structure_carve(structured, odms.silhouettes(), config) == structured
        detailed = detail_carve(upsampled, odms)
        assert detail_carve(detailed, odms) == detailed


def test_extraction_commutes_with_upsampling_at_scale(rng):
    for _ in range(100):
        grid = random_grid(rng, int(rng.integers(4, 9)), rng.uniform(0.05, 0.5))
        factor = int(rng.integers(2, 5))
        high = upsample_nn(grid, factor)
        for view in ViewId:
            expected = upsample_odm_nn(extract_odm(grid, view), factor)
            assert extract_odm(high, view) == expected


def test_learning_beats_the_baseline(tmp_path):
    split = (500 / 600, 0.0, 100 / 600)
    generate_dataset(tmp_path, count=600, low_resolution=16, factor=4, split=split)
    pairs = load_pairs(tmp_path / "train")
    model = init_model(4, seed=0)
    config = TrainConfig(steps=3000, batch_size=16, learning_rate=0.1, seed=0)
    history = []
    trained = train(model, pairs, config, history.append)
    for losses in (
        [h.loss_sil for h in history],
        [h.loss_depth for h in history],
    ):
        # means of consecutive 50-step windows
        windows = smoothed(losses, window=50)[::50]
        assert windows[-1] < windows[0]
        assert (np.diff(windows) <= LOSS_NOISE * windows[0]).all()

    samples = load_samples(tmp_path / "test")
    assert len(samples) == 100
    table = run_ablation(samples, trained, CarveConfig(factor=4))
    assert table[PredictorKind.MVD] > table[PredictorKind.BASELINE]
    assert table[PredictorKind.MVD] >= table[PredictorKind.SILHOUETTE] - 0.5


def test_carving_a_sphere_to_512():
    sphere = Sphere(center=(0.5, 0.5, 0.5), radius=0.4)
    low = solidify(rasterize(sphere, 32))
    start = time.perf_counter()
    baseline = make_predictor(PredictorKind.BASELINE, 16)
    carved = carve(low, baseline.predict_set(extract_all(low)), CarveConfig(factor=16))
    assert time.perf_counter() - start < 60
    assert carved.resolution == 512
    assert carved.count > 0
    assert carved.is_subset_of(upsample_nn(low, 16))


def _aligned_boxes(rng, count):
    """Boxes on the 2-voxel lattice of a 16^3 grid, clear of every face."""
    edges = [(lo, hi) for lo in range(4, 12, 2) for hi in range(lo + 2, 13, 2)]
    boxes = set()
    while len(boxes) < count:
        picks = rng.integers(len(edges), size=3)
        boxes.add(tuple(edges[i] for i in picks))
    return sorted(boxes)


def _box(edges) -> VoxelGrid:
    return box_grid(16, [lo for lo, _ in edges], [hi for _, hi in edges])


def test_trained_silhouettes_match_a_held_out_box(rng):
    *seen, held_out = _aligned_boxes(rng, 61)
    pairs = []
    for edges in seen:
        high = _box(edges)
        pairs += zip(extract_all(downsample_any(high, 2)), extract_all(high))
    config = TrainConfig(steps=4000, batch_size=32, learning_rate=0.3, seed=0)
    trained = train(init_model(2, seed=0), pairs, config)

    truth = _box(held_out)
    low = downsample_any(truth, 2)
    matches = [
        (predict_sil(trained, extract_odm(low, view)) >= 0.5)
        == silhouette(extract_odm(truth, view))
        for view in ViewId
    ]
    assert np.mean(matches) >= 0.95
