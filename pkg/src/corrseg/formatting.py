"""Window layout: padding a matrix and splitting it into overlapping tiles.

A matrix of size m_in is padded up to m0 so that windows of size t, placed
every t/2 indices, tile the padded diagonal exactly. Consecutive windows
overlap by t/2, so every interior index is seen twice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CorrelationMatrix, SegmentationVector
from .errors import CorrsegError, InvalidThroughputError, LayoutMismatchError


@dataclass(frozen=True)
class WindowLayout:
    """Window count and padded size for one (m_in, throughput) pair."""

    m_in: int
    throughput: int
    v: int
    m0: int

    def __post_init__(self) -> None:
        half = self.throughput // 2
        if self.v < 1 or self.m0 != half * (self.v + 1):
            raise LayoutMismatchError(
                f"inconsistent layout: v={self.v}, m0={self.m0}, t={self.throughput}"
            )

    @property
    def offsets(self) -> np.ndarray:
        """Start index of each window along the diagonal."""
        return np.arange(self.v) * (self.throughput // 2)


@dataclass(frozen=True)
class WindowBatch:
    """Ordered stack of t x t windows cut from one padded matrix."""

    layout: WindowLayout
    windows: np.ndarray

    def __post_init__(self) -> None:
        t = self.layout.throughput
        if self.windows.shape != (self.layout.v, t, t):
            raise LayoutMismatchError(
                f"expected {(self.layout.v, t, t)} windows, got {self.windows.shape}"
            )
        if self.windows.min() < 0.0 or self.windows.max() > 1.0:
            raise LayoutMismatchError("window entries must lie in [0, 1]")


def compute_layout(m_in: int, throughput: int) -> WindowLayout:
    """Number of windows and padded size for an m_in x m_in input.

    For m_in >= t the window count is ceil(2 * m_in / t) - 1; smaller inputs
    get a single window. The padded size t * (v + 1) / 2 is the smallest
    half-t multiple the resulting window chain covers exactly.
    """
    if throughput < 2 or throughput % 2 != 0:
        raise InvalidThroughputError(
            f"throughput must be an even integer >= 2, got {throughput}"
        )
    if m_in < 1:
        raise CorrsegError(f"matrix size must be >= 1, got {m_in}")
    if m_in >= throughput:
        v = -(-2 * m_in // throughput) - 1
    else:
        v = 1
    m0 = throughput * (v + 1) // 2
    return WindowLayout(m_in=m_in, throughput=throughput, v=v, m0=m0)


def identity_pad(r: CorrelationMatrix, layout: WindowLayout) -> np.ndarray:
    """Embed r in an m0 x m0 matrix, padding with an identity tail.

    Padded rows and columns are zero except for ones on the diagonal, so the
    tail reads as size-one groups that never disturb the original block
    structure.
    """
    if r.size != layout.m_in:
        raise LayoutMismatchError(
            f"matrix size {r.size} does not match layout m_in {layout.m_in}"
        )
    out = np.zeros((layout.m0, layout.m0))
    out[: r.size, : r.size] = r.values
    tail = np.arange(r.size, layout.m0)
    out[tail, tail] = 1.0
    return out


def wocd_split(padded: np.ndarray, layout: WindowLayout) -> WindowBatch:
    """Cut the padded matrix into v half-overlapping diagonal windows."""
    if padded.shape != (layout.m0, layout.m0):
        raise LayoutMismatchError(
            f"padded matrix is {padded.shape}, layout expects {(layout.m0, layout.m0)}"
        )
    t = layout.throughput
    windows = np.stack(
        [padded[s : s + t, s : s + t] for s in layout.offsets]
    )
    return WindowBatch(layout=layout, windows=windows)


def trim_segmentation(s0: SegmentationVector, layout: WindowLayout) -> SegmentationVector:
    """Drop the padded tail of a full-length segmentation.

    Keeps the first m_in bits and forces bit 0 to 1, which is a no-op for
    any segmentation produced by the merge stage.
    """
    if s0.length != layout.m0:
        raise LayoutMismatchError(
            f"segmentation length {s0.length} does not match padded size {layout.m0}"
        )
    bits = s0.bits[: layout.m_in].copy()
    bits[0] = 1
    return SegmentationVector(bits)
