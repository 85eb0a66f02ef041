"""Surface-sampling F1 between two voxel objects.

Both objects are meshed from their exposed faces, normalised to the unit
cube and sampled area-uniformly with the same seed. A point counts as
matched when its squared distance to the nearest sample of the other set is
within ``threshold_sq``.
"""

import logging

import numpy as np
from scipy.spatial import cKDTree

from mvd_sr.errors import EmptyGridError
from mvd_sr.metrics.mesh import exposed_face_mesh, sample_surface
from mvd_sr.metrics.report import EvalReport, f1_score
from mvd_sr.voxel.grid import VoxelGrid

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 10_000
DEFAULT_THRESHOLD_SQ = 1e-4


def matched_percent(
    points: np.ndarray, reference: np.ndarray, threshold_sq: float
) -> float:
    distances, _ = cKDTree(reference).query(points, k=1)
    return 100.0 * np.count_nonzero(distances**2 <= threshold_sq) / len(points)


def f1_surface(
    pred: VoxelGrid,
    gt: VoxelGrid,
    n: int = DEFAULT_SAMPLES,
    threshold_sq: float = DEFAULT_THRESHOLD_SQ,
    seed: int = 0,
) -> EvalReport:
    for name, grid in (("prediction", pred), ("ground truth", gt)):
        if grid.count == 0:
            raise EmptyGridError(f"{name} grid is empty")

    pred_points = sample_surface(exposed_face_mesh(pred), n, seed)
    gt_points = sample_surface(exposed_face_mesh(gt), n, seed)
    precision = matched_percent(pred_points, gt_points, threshold_sq)
    recall = matched_percent(gt_points, pred_points, threshold_sq)
    logger.debug("precision=%.3f recall=%.3f over %d samples", precision, recall, n)
    return EvalReport(
        f1=f1_score(precision, recall),
        precision=precision,
        recall=recall,
        sample_count=n,
        threshold_sq=threshold_sq,
        seed=seed,
    )
