"""Closed-form ridge regression from flattened windows to boundary bits.

Each t x t window becomes a feature row: the row-major flattened entries
followed by a constant 1.0 bias feature. One linear model maps that row to
t per-index group-start scores. Training solves the regularized normal
equations by Cholesky factorization; the bias feature is never penalized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import linalg as sla

from . import fileio
from .core import ProbabilityVector
from .errors import (
    EmptyTrainingSetError,
    ModelFormatError,
    ParamConstraintError,
    ShapeMismatchError,
    SingularSystemError,
)

MODEL_FORMAT_VERSION = 1


def flatten_window(w: np.ndarray) -> np.ndarray:
    """Row-major flatten of a square window plus a trailing 1.0 bias."""
    values = np.asarray(w, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ShapeMismatchError(f"window must be square, got shape {values.shape}")
    return np.concatenate([values.reshape(-1), [1.0]])


@dataclass(frozen=True)
class TrainingSet:
    """Stack of windows with binary per-index targets.

    windows has shape (n, t, t); targets has shape (n, t) with entries in
    {0, 1}. A target bit is 1 when the matching global index starts a group,
    so position 0 of a window is 1 only when that is true of its slice.
    """

    windows: np.ndarray
    targets: np.ndarray
    split: str = "train"

    def __post_init__(self) -> None:
        windows = np.asarray(self.windows, dtype=np.float64)
        targets = np.asarray(self.targets)
        if windows.ndim != 3 or windows.shape[1] != windows.shape[2]:
            raise ShapeMismatchError(f"windows must be (n, t, t), got {windows.shape}")
        if targets.shape != windows.shape[:2]:
            raise ShapeMismatchError(
                f"targets shape {targets.shape} does not match windows {windows.shape}"
            )
        if targets.size and not np.isin(targets, (0, 1)).all():
            raise ShapeMismatchError("targets must be binary")
        if windows.size and not np.all(np.isfinite(windows)):
            raise ShapeMismatchError("windows must be finite")
        object.__setattr__(self, "windows", windows)
        object.__setattr__(self, "targets", targets.astype(np.uint8))

    @classmethod
    def from_pairs(
        cls, pairs: Sequence[tuple[np.ndarray, np.ndarray]], split: str = "train"
    ) -> "TrainingSet":
        if not pairs:
            raise EmptyTrainingSetError(f"no records in {split!r} split")
        windows = np.stack([np.asarray(w, dtype=np.float64) for w, _ in pairs])
        targets = np.stack([np.asarray(t) for _, t in pairs])
        return cls(windows=windows, targets=targets, split=split)

    @property
    def count(self) -> int:
        return self.windows.shape[0]

    @property
    def throughput(self) -> int:
        if self.count == 0:
            raise EmptyTrainingSetError("training set is empty")
        return self.windows.shape[1]

    def feature_matrix(self) -> np.ndarray:
        """All windows flattened with bias, shape (n, t*t + 1)."""
        n, t, _ = self.windows.shape
        flat = self.windows.reshape(n, t * t)
        return np.hstack([flat, np.ones((n, 1))])


@dataclass(frozen=True)
class Standardizer:
    """Per-feature shift and scale fitted on a training set.

    The bias feature keeps mean 0 and std 1 so it passes through unchanged.
    """

    means: np.ndarray
    stds: np.ndarray

    def __post_init__(self) -> None:
        means = np.asarray(self.means, dtype=np.float64)
        stds = np.asarray(self.stds, dtype=np.float64)
        if means.shape != stds.shape or means.ndim != 1:
            raise ShapeMismatchError("means and stds must be 1-D and aligned")
        if np.any(stds <= 0.0):
            raise ParamConstraintError("standardizer stds must be strictly positive")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stds", stds)

    def transform(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64)
        if features.shape[-1] != self.means.shape[0]:
            raise ShapeMismatchError(
                f"feature width {features.shape[-1]} does not match standardizer "
                f"width {self.means.shape[0]}"
            )
        return (features - self.means) / self.stds


def fit_standardizer(ts: TrainingSet) -> Standardizer:
    """Population mean and std per feature; zero-variance features get std 1."""
    if ts.count == 0:
        raise EmptyTrainingSetError("cannot fit a standardizer on an empty set")
    features = ts.feature_matrix()
    means = features.mean(axis=0)
    stds = features.std(axis=0)
    stds[stds == 0.0] = 1.0
    means[-1] = 0.0
    stds[-1] = 1.0
    return Standardizer(means=means, stds=stds)


@dataclass(frozen=True)
class RidgeModel:
    """Trained linear map from window features to group-start scores."""

    throughput: int
    weights: np.ndarray
    lam: float
    standardizer: Standardizer | None = None
    training_meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=np.float64)
        t = self.throughput
        if weights.shape != (t * t + 1, t):
            raise ShapeMismatchError(
                f"weights must be ({t * t + 1}, {t}) for throughput {t}, "
                f"got {weights.shape}"
            )
        if not np.all(np.isfinite(weights)):
            raise ParamConstraintError("weights must be finite")
        if self.lam < 0.0:
            raise ParamConstraintError(f"lambda must be >= 0, got {self.lam}")
        weights = weights.copy()
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)


def train_ridge(
    ts: TrainingSet,
    lam: float = 1.0,
    standardize: bool = False,
    meta: dict | None = None,
) -> RidgeModel:
    """Solve (X'X + lam * I~) W = X'Y where I~ has a zeroed bias entry.

    The Gram matrix is positive definite for lam > 0, so Cholesky succeeds;
    at lam = 0 a rank-deficient design is reported as SingularSystemError
    rather than silently pseudo-inverted.
    """
    if ts.count == 0:
        raise EmptyTrainingSetError("cannot train on an empty set")
    if lam < 0.0:
        raise ParamConstraintError(f"lambda must be >= 0, got {lam}")
    standardizer = fit_standardizer(ts) if standardize else None
    features = ts.feature_matrix()
    if standardizer is not None:
        features = standardizer.transform(features)
    targets = ts.targets.astype(np.float64)
    d = features.shape[1]
    penalty = lam * np.eye(d)
    penalty[-1, -1] = 0.0
    gram = features.T @ features + penalty
    rhs = features.T @ targets
    try:
        factor = sla.cho_factor(gram)
        weights = sla.cho_solve(factor, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"normal equations are singular at lambda={lam}; "
            "the design matrix is rank deficient"
        ) from exc
    training_meta = {"split": ts.split, "count": ts.count}
    if meta:
        training_meta.update(meta)
    return RidgeModel(
        throughput=ts.throughput,
        weights=weights,
        lam=float(lam),
        standardizer=standardizer,
        training_meta=training_meta,
    )


def predict_features(model: RidgeModel, features: np.ndarray) -> np.ndarray:
    """Scores for pre-flattened feature rows, clamped to [0, 1]."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape[-1] != model.weights.shape[0]:
        raise ShapeMismatchError(
            f"feature width {features.shape[-1]} does not match model "
            f"width {model.weights.shape[0]}"
        )
    if model.standardizer is not None:
        features = model.standardizer.transform(features)
    return np.clip(features @ model.weights, 0.0, 1.0)


def predict(model: RidgeModel, w: np.ndarray) -> ProbabilityVector:
    """Per-index group-start probabilities for one t x t window."""
    w = np.asarray(w, dtype=np.float64)
    t = model.throughput
    if w.shape != (t, t):
        raise ShapeMismatchError(
            f"window shape {w.shape} does not match model throughput {t}"
        )
    scores = predict_features(model, flatten_window(w)[None, :])[0]
    return ProbabilityVector(scores)


def save_model(model: RidgeModel, path: str | Path) -> None:
    """Write a model as a JSON document with lossless float precision."""
    std = model.standardizer
    document = {
        "format_version": MODEL_FORMAT_VERSION,
        "throughput": model.throughput,
        "lambda": model.lam,
        "standardized": std is not None,
        "means": None if std is None else list(std.means),
        "stds": None if std is None else list(std.stds),
        "weights": [list(row) for row in model.weights],
        "training_meta": model.training_meta,
    }
    fileio.write_json(path, document)


def load_model(path: str | Path) -> RidgeModel:
    """Read a model written by :func:`save_model`."""
    document = fileio.read_json(path)
    if not isinstance(document, dict):
        raise ModelFormatError(f"{path}: model file must hold a JSON object")
    version = document.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: format_version {version!r} is not supported "
            f"(expected {MODEL_FORMAT_VERSION})"
        )
    try:
        throughput = int(document["throughput"])
        lam = float(document["lambda"])
        standardized = bool(document["standardized"])
        weights = np.array(document["weights"], dtype=np.float64)
        meta = dict(document.get("training_meta") or {})
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"{path}: missing or malformed field ({exc})") from exc
    standardizer = None
    if standardized:
        if document.get("means") is None or document.get("stds") is None:
            raise ModelFormatError(f"{path}: standardized model lacks means/stds")
        standardizer = Standardizer(
            means=np.array(document["means"], dtype=np.float64),
            stds=np.array(document["stds"], dtype=np.float64),
        )
    try:
        return RidgeModel(
            throughput=throughput,
            weights=weights,
            lam=lam,
            standardizer=standardizer,
            training_meta=meta,
        )
    except ShapeMismatchError as exc:
        raise ModelFormatError(f"{path}: {exc}") from exc
