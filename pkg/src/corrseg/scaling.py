"""Monotone rescaling of correlation values before windowing.

The map blends a linear term, a logistic term centered at 0.5, and a
constant offset. Whatever the parameters, 0.5 maps to 0.5 and the output
stays inside [0, 1], so rescaling can sharpen or flatten contrast without
ever inventing out-of-range correlations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParamConstraintError, ValueRangeError


@dataclass(frozen=True)
class ScalingParams:
    """Rescale coefficients: linear weight a, logistic weight b, slope omega.

    Feasible region: a >= 0, b >= 0, a + b <= 1, 0 <= omega <= 1. The
    remaining mass 1 - a - b becomes a constant pull toward 0.5.
    """

    a: float
    b: float
    omega: float

    def __post_init__(self) -> None:
        if not all(np.isfinite(v) for v in (self.a, self.b, self.omega)):
            raise ParamConstraintError("scaling parameters must be finite")
        if self.a < 0.0 or self.b < 0.0:
            raise ParamConstraintError(f"a and b must be >= 0, got a={self.a}, b={self.b}")
        if self.a + self.b > 1.0:
            raise ParamConstraintError(
                f"a + b must not exceed 1, got {self.a} + {self.b} = {self.a + self.b}"
            )
        if not 0.0 <= self.omega <= 1.0:
            raise ParamConstraintError(f"omega must lie in [0, 1], got {self.omega}")

    @classmethod
    def identity(cls) -> "ScalingParams":
        """Parameters that leave every value unchanged."""
        return cls(a=1.0, b=0.0, omega=0.0)


def _apply(values: np.ndarray, p: ScalingParams) -> np.ndarray:
    logistic = 1.0 / (1.0 + np.exp(p.omega * (25.0 - 50.0 * values)))
    out = p.a * values + p.b * logistic + (1.0 - p.a - p.b) / 2.0
    return np.clip(out, 0.0, 1.0)


def rescale_value(r: float, p: ScalingParams) -> float:
    """Rescale one correlation value in [0, 1]."""
    if not 0.0 <= r <= 1.0:
        raise ValueRangeError(f"value {r!r} outside [0, 1]")
    return float(_apply(np.float64(r), p))


def rescale_matrix(m: np.ndarray, p: ScalingParams) -> np.ndarray:
    """Rescale every entry of an array; shape and symmetry are preserved.

    Accepts any array shape (a single matrix or a stack of them) as long as
    all entries lie in [0, 1].
    """
    values = np.asarray(m, dtype=np.float64)
    if values.size == 0:
        raise ValueRangeError("cannot rescale an empty array")
    if not np.all(np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0:
        raise ValueRangeError("matrix entries must lie in [0, 1]")
    return _apply(values, p)
