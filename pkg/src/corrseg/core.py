"""Core value types: correlation matrices, segmentations, probabilities.

A segmentation of an n x n correlation matrix is a binary vector of length n
whose 1 bits mark the first index of each contiguous group. Index 0 always
starts a group, so a valid segmentation has bits[0] = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AsymmetricError, NotSquareError, ValueRangeError

SYMMETRY_TOL = 1e-6


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CorrelationMatrix:
    """Square symmetric matrix with entries in [0, 1].

    Validation runs on construction, so holding an instance is proof the
    invariants hold. The backing array is read-only.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise NotSquareError(f"expected a square matrix, got shape {values.shape}")
        if values.shape[0] < 1:
            raise NotSquareError("matrix must have at least one row")
        if not np.all(np.isfinite(values)):
            raise ValueRangeError("matrix entries must be finite")
        out_of_range = (values < 0.0) | (values > 1.0)
        if out_of_range.any():
            bad = np.unravel_index(int(np.argmax(out_of_range)), values.shape)
            raise ValueRangeError(
                f"entry at {bad} is {values[bad]!r}, outside [0, 1]"
            )
        gap = np.abs(values - values.T)
        worst = np.unravel_index(int(np.argmax(gap)), gap.shape)
        if gap[worst] > SYMMETRY_TOL:
            i, j = worst
            raise AsymmetricError(
                f"entries ({i}, {j}) and ({j}, {i}) differ by {gap[worst]:.3g}, "
                f"beyond the {SYMMETRY_TOL:g} symmetry tolerance"
            )
        object.__setattr__(self, "values", _freeze(values))

    @property
    def size(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class SegmentationVector:
    """Binary group-start vector; bits[0] is always 1."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        bits = np.array(self.bits)
        if bits.ndim != 1 or bits.shape[0] < 1:
            raise ValueRangeError("segmentation must be a non-empty 1-D vector")
        if not np.isin(bits, (0, 1)).all():
            raise ValueRangeError("segmentation bits must be 0 or 1")
        bits = bits.astype(np.uint8)
        if bits[0] != 1:
            raise ValueRangeError("segmentation bit 0 must be 1: index 0 starts a group")
        object.__setattr__(self, "bits", _freeze(bits))

    @property
    def length(self) -> int:
        return self.bits.shape[0]

    @property
    def group_count(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True)
class ProbabilityVector:
    """Vector of per-index group-start probabilities in [0, 1]."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.shape[0] < 1:
            raise ValueRangeError("probabilities must be a non-empty 1-D vector")
        if not np.all(np.isfinite(probs)) or probs.min() < 0.0 or probs.max() > 1.0:
            raise ValueRangeError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "probs", _freeze(probs))

    @property
    def length(self) -> int:
        return self.probs.shape[0]


def validate_matrix(raw: np.ndarray) -> CorrelationMatrix:
    """Check squareness, range, and symmetry of raw input.

    Raises NotSquareError, ValueRangeError, or AsymmetricError; on success
    returns the wrapped matrix with values untouched.
    """
    return CorrelationMatrix(np.asarray(raw, dtype=np.float64))


def group_starts(seg: SegmentationVector) -> np.ndarray:
    """Indices at which a new group begins, in increasing order."""
    return np.flatnonzero(seg.bits)


def segmentation_to_blocks(seg: SegmentationVector) -> np.ndarray:
    """Expand a segmentation into its binary block matrix.

    Entry (i, j) is 1 exactly when i and j fall in the same group, which
    places contiguous all-ones squares on the diagonal and zeros elsewhere.
    """
    group_ids = np.cumsum(seg.bits)
    return (group_ids[:, None] == group_ids[None, :]).astype(np.uint8)
