"""Synthetic correlation matrices with known block structure.

A sample is drawn in two steps: pick a group count from a clamped rounded
normal and scatter the group starts uniformly, then overlay symmetric
Gaussian noise on the exact block matrix, clip to [0, 1], and restore the
unit diagonal. Each sample gets its own RNG stream derived from
(seed, index), so generation order never changes the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CorrelationMatrix, SegmentationVector, segmentation_to_blocks
from .errors import ParamConstraintError

Record = tuple[CorrelationMatrix, SegmentationVector]


@dataclass(frozen=True)
class SynthSpec:
    """Generation recipe: matrix size, noise law, group-count law, volume."""

    size: int
    noise_mean: float
    noise_var: float
    groups_mean: float
    groups_var: float
    count: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ParamConstraintError(f"size must be >= 1, got {self.size}")
        if self.noise_var < 0.0 or self.groups_var < 0.0:
            raise ParamConstraintError("variances must be >= 0")
        if self.count < 1:
            raise ParamConstraintError(f"count must be >= 1, got {self.count}")


@dataclass(frozen=True)
class SynthDataset:
    """Generated records split 70/20/10 in generation order."""

    spec: SynthSpec
    train: list[Record]
    validation: list[Record]
    test: list[Record]

    @property
    def count(self) -> int:
        return len(self.train) + len(self.validation) + len(self.test)


def sample_segmentation(
    size: int, groups_mean: float, groups_var: float, rng: np.random.Generator
) -> SegmentationVector:
    """Draw a segmentation with ~N(groups_mean, groups_var) groups.

    The drawn count is rounded and clamped to [1, size]; the surviving
    count - 1 interior starts are sampled uniformly without replacement.
    """
    drawn = rng.normal(groups_mean, np.sqrt(groups_var))
    n_groups = int(min(max(int(np.rint(drawn)), 1), size))
    bits = np.zeros(size, dtype=np.uint8)
    bits[0] = 1
    if n_groups > 1:
        starts = rng.choice(np.arange(1, size), size=n_groups - 1, replace=False)
        bits[starts] = 1
    return SegmentationVector(bits)


def symmetric_noise(
    size: int, mean: float, var: float, rng: np.random.Generator
) -> np.ndarray:
    """Symmetric Gaussian noise: draw the upper triangle, mirror it down."""
    upper = np.triu_indices(size)
    draws = rng.normal(mean, np.sqrt(var), size=upper[0].size)
    noise = np.zeros((size, size))
    noise[upper] = draws
    lower = np.tril_indices(size, k=-1)
    noise[lower] = noise.T[lower]
    return noise


def build_noisy_matrix(
    seg: SegmentationVector,
    noise_mean: float,
    noise_var: float,
    rng: np.random.Generator,
) -> CorrelationMatrix:
    """Noisy observation of a segmentation's block matrix.

    Noise is added symmetrically, entries are clipped to [0, 1], and the
    diagonal is reset to exactly 1 afterwards.
    """
    blocks = segmentation_to_blocks(seg).astype(np.float64)
    size = seg.length
    values = np.clip(blocks + symmetric_noise(size, noise_mean, noise_var, rng), 0.0, 1.0)
    diag = np.arange(size)
    values[diag, diag] = 1.0
    return CorrelationMatrix(values)


def _sample(spec: SynthSpec, index: int) -> Record:
    rng = np.random.default_rng((spec.seed, index))
    seg = sample_segmentation(spec.size, spec.groups_mean, spec.groups_var, rng)
    matrix = build_noisy_matrix(seg, spec.noise_mean, spec.noise_var, rng)
    return matrix, seg


def generate_dataset(spec: SynthSpec) -> SynthDataset:
    """Generate spec.count records and split them 70/20/10 in order."""
    records = [_sample(spec, i) for i in range(spec.count)]
    n_train = round(0.7 * spec.count)
    n_val = round(0.2 * spec.count)
    return SynthDataset(
        spec=spec,
        train=records[:n_train],
        validation=records[n_train : n_train + n_val],
        test=records[n_train + n_val :],
    )
