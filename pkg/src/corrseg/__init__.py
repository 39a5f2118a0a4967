"""corrseg: segmentation of correlation matrices into contiguous groups.

The pipeline rescales a matrix, pads it to a window-friendly size, slides
half-overlapping windows along the diagonal, predicts per-index group-start
probabilities with a closed-form ridge model, averages the overlaps, and
thresholds the result into a segmentation.
"""

from .core import (
    CorrelationMatrix,
    ProbabilityVector,
    SegmentationVector,
    group_starts,
    segmentation_to_blocks,
    validate_matrix,
)
from .errors import CorrsegError
from .formatting import WindowBatch, WindowLayout, compute_layout, identity_pad, trim_segmentation, wocd_split
from .merge import MergeConfig, binarize, overlap_mean
from .metrics import MetricReport, evaluate_pipeline, mae, mse, r2, transferability, window_diff
from .pipeline import PipelineConfig, SegmentationResult, segment, segment_stack
from .regressor import (
    RidgeModel,
    Standardizer,
    TrainingSet,
    fit_standardizer,
    flatten_window,
    load_model,
    predict,
    save_model,
    train_ridge,
)
from .scaling import ScalingParams, rescale_matrix, rescale_value
from .synthgen import (
    SynthDataset,
    SynthSpec,
    build_noisy_matrix,
    generate_dataset,
    sample_segmentation,
)
from .tuner import (
    GaConfig,
    PsoConfig,
    TuningCandidate,
    evaluate_candidate,
    ga_optimize,
    pso_optimize,
    select_best,
)

__version__ = "0.1.0"

__all__ = [
    "CorrelationMatrix",
    "CorrsegError",
    "GaConfig",
    "MergeConfig",
    "MetricReport",
    "PipelineConfig",
    "ProbabilityVector",
    "PsoConfig",
    "RidgeModel",
    "ScalingParams",
    "SegmentationResult",
    "SegmentationVector",
    "Standardizer",
    "SynthDataset",
    "SynthSpec",
    "TrainingSet",
    "TuningCandidate",
    "WindowBatch",
    "WindowLayout",
    "binarize",
    "build_noisy_matrix",
    "compute_layout",
    "evaluate_candidate",
    "evaluate_pipeline",
    "fit_standardizer",
    "flatten_window",
    "ga_optimize",
    "generate_dataset",
    "group_starts",
    "identity_pad",
    "load_model",
    "mae",
    "mse",
    "overlap_mean",
    "predict",
    "pso_optimize",
    "r2",
    "rescale_matrix",
    "rescale_value",
    "sample_segmentation",
    "save_model",
    "segment",
    "segment_stack",
    "segmentation_to_blocks",
    "select_best",
    "train_ridge",
    "transferability",
    "trim_segmentation",
    "validate_matrix",
    "wocd_split",
    "window_diff",
]
