"""Core type validation and block-matrix expansion."""

import numpy as np
import pytest

from corrseg.core import (
    CorrelationMatrix,
    ProbabilityVector,
    SegmentationVector,
    group_starts,
    segmentation_to_blocks,
    validate_matrix,
)
from corrseg.errors import AsymmetricError, NotSquareError, ValueRangeError


class TestValidateMatrix:
    def test_identity_is_valid(self):
        m = validate_matrix(np.eye(2))
        assert m.size == 2
        np.testing.assert_array_equal(m.values, np.eye(2))

    def test_rejects_non_square(self):
        with pytest.raises(NotSquareError):
            validate_matrix(np.zeros((2, 3)))

    def test_rejects_empty(self):
        with pytest.raises(NotSquareError):
            validate_matrix(np.zeros((0, 0)))

    def test_rejects_value_above_one(self):
        values = np.array([[1.0, 1.1], [1.1, 1.0]])
        with pytest.raises(ValueRangeError):
            validate_matrix(values)

    def test_rejects_negative_value(self):
        values = np.array([[1.0, -0.2], [-0.2, 1.0]])
        with pytest.raises(ValueRangeError):
            validate_matrix(values)

    def test_rejects_asymmetry_beyond_tolerance(self):
        values = np.array([[1.0, 0.5], [0.5 + 1e-3, 1.0]])
        with pytest.raises(AsymmetricError) as err:
            validate_matrix(values)
        # the offending index pair is reported
        assert "(0, 1)" in str(err.value) or "(1, 0)" in str(err.value)

    def test_accepts_asymmetry_within_tolerance(self):
        values = np.array([[1.0, 0.5], [0.5 + 1e-7, 1.0]])
        m = validate_matrix(values)
        assert m.size == 2

    def test_values_are_read_only(self):
        m = validate_matrix(np.eye(3))
        with pytest.raises(ValueError):
            m.values[0, 0] = 0.5

    def test_rejects_nan(self):
        values = np.full((2, 2), np.nan)
        with pytest.raises(ValueRangeError):
            validate_matrix(values)


class TestSegmentationVector:
    def test_first_bit_must_be_one(self):
        with pytest.raises(ValueRangeError):
            SegmentationVector(np.array([0, 1, 0]))

    def test_bits_must_be_binary(self):
        with pytest.raises(ValueRangeError):
            SegmentationVector(np.array([1, 2, 0]))

    def test_group_count(self):
        seg = SegmentationVector(np.array([1, 0, 1, 0, 1]))
        assert seg.group_count == 3
        assert seg.length == 5

    def test_single_index(self):
        seg = SegmentationVector(np.array([1]))
        assert seg.group_count == 1


class TestProbabilityVector:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueRangeError):
            ProbabilityVector(np.array([0.5, 1.2]))
        with pytest.raises(ValueRangeError):
            ProbabilityVector(np.array([-0.1]))

    def test_accepts_bounds(self):
        p = ProbabilityVector(np.array([0.0, 1.0, 0.5]))
        assert p.length == 3


class TestBlocks:
    def test_two_equal_groups(self):
        seg = SegmentationVector(np.array([1, 0, 0, 0, 1, 0, 0, 0]))
        blocks = segmentation_to_blocks(seg)
        expected = np.zeros((8, 8), dtype=np.uint8)
        expected[:4, :4] = 1
        expected[4:, 4:] = 1
        np.testing.assert_array_equal(blocks, expected)

    def test_all_singletons_is_identity(self):
        seg = SegmentationVector(np.ones(3, dtype=int))
        np.testing.assert_array_equal(segmentation_to_blocks(seg), np.eye(3, dtype=np.uint8))

    def test_single_group_is_all_ones(self):
        seg = SegmentationVector(np.array([1, 0, 0]))
        np.testing.assert_array_equal(
            segmentation_to_blocks(seg), np.ones((3, 3), dtype=np.uint8)
        )

    def test_group_starts(self):
        seg = SegmentationVector(np.array([1, 0, 1, 1, 0]))
        np.testing.assert_array_equal(group_starts(seg), [0, 2, 3])

    def test_block_matrix_properties(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(1, 64))
            bits = (rng.random(n) < 0.3).astype(int)
            bits[0] = 1
            seg = SegmentationVector(bits)
            blocks = segmentation_to_blocks(seg)
            np.testing.assert_array_equal(blocks, blocks.T)
            np.testing.assert_array_equal(np.diag(blocks), np.ones(n))
            assert set(np.unique(blocks)) <= {0, 1}

    def test_round_trip_from_block_matrix(self):
        # reading group starts back off the block matrix reproduces the bits
        rng = np.random.default_rng(21)
        for _ in range(300):
            n = int(rng.integers(1, 64))
            bits = (rng.random(n) < rng.uniform(0.05, 0.9)).astype(int)
            bits[0] = 1
            seg = SegmentationVector(bits)
            blocks = segmentation_to_blocks(seg)
            recovered = np.ones(n, dtype=int)
            for i in range(1, n):
                recovered[i] = 0 if blocks[i, i - 1] else 1
            np.testing.assert_array_equal(recovered, seg.bits)
