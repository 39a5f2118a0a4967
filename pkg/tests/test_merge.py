"""Overlap averaging and thresholding."""

import numpy as np
import pytest

from corrseg.core import ProbabilityVector
from corrseg.errors import ParamConstraintError, ShapeMismatchError
from corrseg.formatting import compute_layout
from corrseg.merge import MergeConfig, accumulate_predictions, binarize, overlap_mean


def oracle_overlap_mean(preds, layout):
    """Per-index average over covering windows, computed by direct scan."""
    t = layout.throughput
    out = np.zeros(layout.m0)
    for g in range(layout.m0):
        contributions = [
            preds[i][g - s]
            for i, s in enumerate(layout.offsets)
            if s <= g < s + t
        ]
        out[g] = sum(contributions) / len(contributions)
    return out


class TestOverlapMean:
    def test_two_window_example(self):
        layout = compute_layout(6, 4)
        merged = overlap_mean(
            [np.array([0.0, 0.0, 0.2, 0.4]), np.array([0.6, 0.8, 1.0, 1.0])], layout
        )
        np.testing.assert_allclose(merged.probs, [0.0, 0.0, 0.4, 0.6, 1.0, 1.0])

    def test_single_window_passthrough(self):
        layout = compute_layout(4, 4)
        probs = np.array([0.1, 0.9, 0.3, 0.7])
        merged = overlap_mean([probs], layout)
        np.testing.assert_array_equal(merged.probs, probs)

    def test_constant_predictions_merge_to_the_constant(self):
        layout = compute_layout(24, 8)
        merged = overlap_mean([np.full(8, 0.7)] * layout.v, layout)
        np.testing.assert_allclose(merged.probs, 0.7, atol=1e-15)

    def test_matches_scan_oracle(self):
        rng = np.random.default_rng(83)
        for m_in, t in ((16, 4), (9, 4), (25, 8), (40, 16)):
            layout = compute_layout(m_in, t)
            preds = [rng.uniform(0, 1, t) for _ in range(layout.v)]
            merged = overlap_mean(preds, layout)
            np.testing.assert_allclose(
                merged.probs, oracle_overlap_mean(preds, layout), atol=1e-15
            )

    def test_each_value_within_contributor_range(self):
        rng = np.random.default_rng(89)
        layout = compute_layout(20, 8)
        preds = [rng.uniform(0, 1, 8) for _ in range(layout.v)]
        merged = overlap_mean(preds, layout)
        t = layout.throughput
        for g in range(layout.m0):
            contributions = [
                preds[i][g - s]
                for i, s in enumerate(layout.offsets)
                if s <= g < s + t
            ]
            assert min(contributions) - 1e-12 <= merged.probs[g] <= max(contributions) + 1e-12

    def test_linear_in_predictions(self):
        rng = np.random.default_rng(97)
        layout = compute_layout(14, 4)
        p = rng.uniform(0, 1, (layout.v, 4))
        q = rng.uniform(0, 1, (layout.v, 4))
        for alpha, beta in ((2.0, -1.0), (0.3, 0.5), (-1.5, 4.0)):
            combined = accumulate_predictions(alpha * p + beta * q, layout)
            separate = alpha * accumulate_predictions(p, layout) + beta * accumulate_predictions(q, layout)
            np.testing.assert_allclose(combined, separate, atol=1e-12)

    def test_accepts_probability_vectors(self):
        layout = compute_layout(4, 4)
        merged = overlap_mean([ProbabilityVector(np.full(4, 0.25))], layout)
        np.testing.assert_array_equal(merged.probs, 0.25)

    def test_wrong_window_count(self):
        layout = compute_layout(6, 4)
        with pytest.raises(ShapeMismatchError):
            overlap_mean([np.zeros(4)], layout)


class TestBinarize:
    def test_threshold_with_tie_counting_as_boundary(self):
        probs = ProbabilityVector(np.array([0.2, 0.5, 0.49, 0.51]))
        seg = binarize(probs, MergeConfig(threshold=0.5))
        np.testing.assert_array_equal(seg.bits, [1, 1, 0, 1])

    def test_first_bit_forced(self):
        probs = ProbabilityVector(np.array([0.0, 0.9]))
        seg = binarize(probs, MergeConfig(threshold=0.5))
        np.testing.assert_array_equal(seg.bits, [1, 1])

    def test_monotone_in_threshold(self):
        rng = np.random.default_rng(101)
        probs = ProbabilityVector(rng.uniform(0, 1, 50))
        previous = None
        for th in np.linspace(0, 1, 21):
            bits = binarize(probs, MergeConfig(threshold=float(th))).bits
            if previous is not None:
                assert np.all(bits <= previous)
            previous = bits

    def test_threshold_validation(self):
        with pytest.raises(ParamConstraintError):
            MergeConfig(threshold=1.5)
