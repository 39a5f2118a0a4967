"""End-to-end segmentation: rescale, pad, window, predict, merge, trim.

The pipeline accepts a correlation matrix of any size from 1 upward. Inputs
smaller than the model throughput are carried by identity padding; larger
inputs are covered by a chain of half-overlapping windows whose predictions
are averaged back together.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    CorrelationMatrix,
    ProbabilityVector,
    SegmentationVector,
    segmentation_to_blocks,
)
from .errors import InvalidThroughputError, ShapeMismatchError
from .formatting import compute_layout, identity_pad, trim_segmentation, wocd_split
from .merge import MergeConfig, accumulate_predictions, binarize, overlap_mean
from .regressor import RidgeModel, predict, predict_features
from .scaling import ScalingParams, rescale_matrix


@dataclass(frozen=True)
class PipelineConfig:
    """Everything segment() needs: scale parameters, threshold, model."""

    model: RidgeModel
    scaling: ScalingParams = field(default_factory=ScalingParams.identity)
    merge: MergeConfig = field(default_factory=MergeConfig)

    def __post_init__(self) -> None:
        t = self.model.throughput
        if t < 2 or t % 2 != 0:
            raise InvalidThroughputError(
                f"pipeline needs an even throughput >= 2, got {t}"
            )


@dataclass(frozen=True)
class SegmentationResult:
    """Output bundle: bits, their block expansion, and raw probabilities.

    Thresholding probabilities at the configured threshold (with bit 0
    forced) reproduces segmentation exactly; denoised is always the block
    matrix of segmentation.
    """

    segmentation: SegmentationVector
    denoised: np.ndarray
    probabilities: ProbabilityVector


def segment(r: CorrelationMatrix, cfg: PipelineConfig) -> SegmentationResult:
    """Segment one correlation matrix into contiguous groups."""
    layout = compute_layout(r.size, cfg.model.throughput)
    scaled = CorrelationMatrix(rescale_matrix(r.values, cfg.scaling))
    padded = identity_pad(scaled, layout)
    batch = wocd_split(padded, layout)
    preds = [predict(cfg.model, w) for w in batch.windows]
    merged = overlap_mean(preds, layout)
    seg = trim_segmentation(binarize(merged, cfg.merge), layout)
    probabilities = ProbabilityVector(merged.probs[: r.size])
    return SegmentationResult(
        segmentation=seg,
        denoised=segmentation_to_blocks(seg),
        probabilities=probabilities,
    )


def segment_stack(
    values: np.ndarray, cfg: PipelineConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized segment() over a stack of same-size matrices.

    values has shape (n, m, m) and every matrix must already satisfy the
    correlation-matrix invariants. Returns (probabilities, bits), each of
    shape (n, m), numerically identical to running segment() per matrix.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 3 or values.shape[1] != values.shape[2]:
        raise ShapeMismatchError(f"expected a (n, m, m) stack, got {values.shape}")
    n, m, _ = values.shape
    t = cfg.model.throughput
    layout = compute_layout(m, t)
    scaled = rescale_matrix(values, cfg.scaling)
    padded = np.zeros((n, layout.m0, layout.m0))
    padded[:, :m, :m] = scaled
    tail = np.arange(m, layout.m0)
    padded[:, tail, tail] = 1.0
    features = np.empty((n, layout.v, t * t + 1))
    features[..., -1] = 1.0
    for i, start in enumerate(layout.offsets):
        window = padded[:, start : start + t, start : start + t]
        features[:, i, : t * t] = window.reshape(n, t * t)
    scores = predict_features(cfg.model, features.reshape(n * layout.v, t * t + 1))
    merged = accumulate_predictions(scores.reshape(n, layout.v, t), layout)
    bits = (merged >= cfg.merge.threshold).astype(np.uint8)
    bits[:, 0] = 1
    return merged[:, :m], bits[:, :m]
