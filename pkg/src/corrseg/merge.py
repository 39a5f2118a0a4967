"""Merging overlapping window predictions into one probability vector.

Window i covers global indices [i * t/2, i * t/2 + t). Interior indices are
covered by exactly two windows and receive the plain average of the two
predictions; the first and last half-windows are covered once and pass
through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ProbabilityVector, SegmentationVector
from .errors import ParamConstraintError, ShapeMismatchError
from .formatting import WindowLayout


@dataclass(frozen=True)
class MergeConfig:
    """Binarization threshold for merged probabilities."""

    threshold: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ParamConstraintError(
                f"threshold must lie in [0, 1], got {self.threshold}"
            )


def accumulate_predictions(preds: np.ndarray, layout: WindowLayout) -> np.ndarray:
    """Sum window predictions into global slots and divide by coverage.

    preds has shape (v, t). This is the arithmetic core of overlap_mean,
    exposed separately because it is linear in preds and batch callers
    reuse it on stacked arrays of shape (..., v, t).
    """
    t = layout.throughput
    if preds.shape[-2:] != (layout.v, t):
        raise ShapeMismatchError(
            f"expected predictions of shape (..., {layout.v}, {t}), got {preds.shape}"
        )
    sums = np.zeros(preds.shape[:-2] + (layout.m0,))
    counts = np.zeros(layout.m0)
    for i, start in enumerate(layout.offsets):
        sums[..., start : start + t] += preds[..., i, :]
        counts[start : start + t] += 1.0
    return sums / counts


def overlap_mean(
    preds: Sequence[ProbabilityVector | np.ndarray], layout: WindowLayout
) -> ProbabilityVector:
    """Average per-window probabilities into a length-m0 vector.

    Every global index gets the uniform mean of the predictions from the
    windows that cover it, with no positional weighting.
    """
    if len(preds) != layout.v:
        raise ShapeMismatchError(
            f"got {len(preds)} window predictions, layout expects {layout.v}"
        )
    rows = np.stack(
        [p.probs if isinstance(p, ProbabilityVector) else np.asarray(p, float) for p in preds]
    )
    return ProbabilityVector(accumulate_predictions(rows, layout))


def binarize(s: ProbabilityVector, cfg: MergeConfig) -> SegmentationVector:
    """Threshold probabilities into segmentation bits.

    A probability equal to the threshold counts as a boundary, and bit 0 is
    forced to 1 regardless of its probability.
    """
    bits = (s.probs >= cfg.threshold).astype(np.uint8)
    bits[0] = 1
    return SegmentationVector(bits)
