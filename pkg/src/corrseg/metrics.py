"""Segmentation and regression metrics.

window_diff slides a probe of width k along the index axis and counts
probes where reference and hypothesis disagree on the number of group
starts; it penalizes near misses less than flat disagreement counting.
Probabilistic outputs are scored with MSE, MAE, and R^2 pooled over every
position of every sample. All rates are stored as fractions in [0, 1];
multiply by 100 only when presenting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SegmentationVector
from .errors import (
    DegenerateWindowError,
    EmptyGridError,
    EmptyTrainingSetError,
    LengthMismatchError,
    ZeroVarianceError,
)
from .pipeline import PipelineConfig, segment_stack
from .synthgen import Record


def _aligned(pred: np.ndarray, truth: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    truth = np.asarray(truth, dtype=np.float64).reshape(-1)
    if pred.shape != truth.shape:
        raise LengthMismatchError(
            f"prediction length {pred.size} does not match truth length {truth.size}"
        )
    if pred.size == 0:
        raise LengthMismatchError("cannot score empty vectors")
    return pred, truth


def mse(pred: np.ndarray, truth: np.ndarray) -> float:
    """Mean squared error over all positions."""
    pred, truth = _aligned(pred, truth)
    return float(np.mean((pred - truth) ** 2))


def mae(pred: np.ndarray, truth: np.ndarray) -> float:
    """Mean absolute error over all positions."""
    pred, truth = _aligned(pred, truth)
    return float(np.mean(np.abs(pred - truth)))


def r2(pred: np.ndarray, truth: np.ndarray) -> float:
    """Coefficient of determination; undefined for constant truth."""
    pred, truth = _aligned(pred, truth)
    ss_tot = float(np.sum((truth - truth.mean()) ** 2))
    if ss_tot == 0.0:
        raise ZeroVarianceError("R^2 is undefined when the truth is constant")
    ss_res = float(np.sum((pred - truth) ** 2))
    return 1.0 - ss_res / ss_tot


def default_probe_width(ref: SegmentationVector) -> int:
    """Half the mean reference group length, clamped into [1, N - 1]."""
    n = ref.length
    k = max(1, round(n / (2 * ref.group_count)))
    return min(k, n - 1)


def window_diff(
    ref: SegmentationVector, hyp: SegmentationVector, k: int | None = None
) -> float:
    """Fraction of width-k probes whose group-start counts disagree.

    A probe anchored at i compares the number of group starts in positions
    i+1 .. i+k of both vectors; bit 0 is never a counted start. There are
    N - k probes, so the result lies in [0, 1]. Identical vectors score 0.
    """
    if ref.length != hyp.length:
        raise LengthMismatchError(
            f"reference length {ref.length} does not match hypothesis {hyp.length}"
        )
    n = ref.length
    if k is None:
        k = default_probe_width(ref)
    if k < 1 or k >= n:
        raise DegenerateWindowError(f"probe width k={k} must satisfy 1 <= k < {n}")
    ref_cum = np.concatenate([[0], np.cumsum(ref.bits)])
    hyp_cum = np.concatenate([[0], np.cumsum(hyp.bits)])
    anchors = np.arange(n - k)
    ref_counts = ref_cum[anchors + k + 1] - ref_cum[anchors + 1]
    hyp_counts = hyp_cum[anchors + k + 1] - hyp_cum[anchors + 1]
    return float(np.mean(ref_counts != hyp_counts))


@dataclass(frozen=True)
class MetricReport:
    """Scores for one model on one set of records."""

    mse: float
    mae: float
    r2: float
    wd: float
    n: int

    def as_dict(self) -> dict:
        return {"mse": self.mse, "mae": self.mae, "r2": self.r2, "wd": self.wd, "n": self.n}


def transferability(metric_grid: np.ndarray) -> np.ndarray:
    """Per-model mean metric across every evaluation setting.

    metric_grid[i, p] holds the metric of the model trained on setting i
    when evaluated on setting p; row means summarize how well each model
    carries over. Lower is better for error-like metrics.
    """
    grid = np.asarray(metric_grid, dtype=np.float64)
    if grid.size == 0:
        raise EmptyGridError("transferability needs a non-empty metric grid")
    if grid.ndim != 2:
        raise EmptyGridError(f"metric grid must be 2-D, got ndim {grid.ndim}")
    return grid.mean(axis=1)


def evaluate_pipeline(records: list[Record], cfg: PipelineConfig) -> MetricReport:
    """Run the full pipeline over records and pool the scores.

    MSE, MAE, and R^2 are computed over the concatenated positions of all
    samples; window_diff (default probe width) is averaged per sample.
    """
    if not records:
        raise EmptyTrainingSetError("no records to evaluate")
    by_size: dict[int, list[int]] = {}
    for i, (matrix, _) in enumerate(records):
        by_size.setdefault(matrix.size, []).append(i)
    pooled_pred: list[np.ndarray] = []
    pooled_truth: list[np.ndarray] = []
    wd_total = 0.0
    for size, idxs in by_size.items():
        stack = np.stack([records[i][0].values for i in idxs])
        probs, bits = segment_stack(stack, cfg)
        for row, i in enumerate(idxs):
            truth = records[i][1]
            wd_total += window_diff(truth, SegmentationVector(bits[row]))
            pooled_pred.append(probs[row])
            pooled_truth.append(truth.bits)
    pred = np.concatenate(pooled_pred)
    truth = np.concatenate(pooled_truth).astype(np.float64)
    return MetricReport(
        mse=mse(pred, truth),
        mae=mae(pred, truth),
        r2=r2(pred, truth),
        wd=wd_total / len(records),
        n=len(records),
    )
