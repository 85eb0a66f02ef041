from mvd_sr.metrics.iou import iou
from mvd_sr.metrics.mesh import (
    QuadMesh,
    exposed_face_mesh,
    sample_surface,
    write_obj,
)
from mvd_sr.metrics.report import CSV_COLUMNS, EvalReport, f1_score, format_csv
from mvd_sr.metrics.surface import f1_surface

__all__ = [
    "CSV_COLUMNS",
    "EvalReport",
    "QuadMesh",
    "exposed_face_mesh",
    "f1_score",
    "f1_surface",
    "format_csv",
    "iou",
    "sample_surface",
    "write_obj",
]
