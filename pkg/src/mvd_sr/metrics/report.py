import csv
import io
from dataclasses import dataclass
from typing import Iterator, Optional

CSV_COLUMNS = ("category", "metric", "value", "n", "seed")


def f1_score(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class EvalReport:
    """Result of scoring one prediction against its ground truth.

    ``iou`` is a fraction in [0, 1]; ``f1``, ``precision`` and ``recall`` are
    percentages. ``sample_count`` is the number of surface points drawn per
    mesh, or the number of objects averaged for an IoU report.
    """

    iou: Optional[float] = None
    f1: Optional[float] = None
    precision: Optional[float] = None
    recall: Optional[float] = None
    sample_count: int = 0
    threshold_sq: Optional[float] = None
    seed: Optional[int] = None

    def to_pairs(self) -> list[tuple[str, str]]:
        pairs = []
        for key in (
            "iou",
            "f1",
            "precision",
            "recall",
            "sample_count",
            "threshold_sq",
            "seed",
        ):
            value = getattr(self, key)
            if value is None:
                continue
            text = f"{value:.6g}" if isinstance(value, float) else str(value)
            pairs.append((key, text))
        return pairs

    def to_text(self) -> str:
        return "".join(f"{key}={value}\n" for key, value in self.to_pairs())

    def csv_rows(self, category: str) -> Iterator[tuple]:
        seed = "" if self.seed is None else str(self.seed)
        if self.iou is not None:
            n = max(self.sample_count, 1)
            yield category, "iou", f"{self.iou:.6g}", n, seed
        for metric in ("f1", "precision", "recall"):
            if (value := getattr(self, metric)) is not None:
                yield category, metric, f"{value:.6g}", self.sample_count, seed


def format_csv(rows, header: bool = True) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if header:
        writer.writerow(CSV_COLUMNS)
    writer.writerows(rows)
    return buffer.getvalue()
