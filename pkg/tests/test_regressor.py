"""Ridge training against independent solvers and hand-built systems."""

import numpy as np
import pytest

from corrseg.errors import (
    EmptyTrainingSetError,
    ParamConstraintError,
    ShapeMismatchError,
    SingularSystemError,
)
from corrseg.regressor import (
    RidgeModel,
    TrainingSet,
    fit_standardizer,
    flatten_window,
    predict,
    train_ridge,
)
from corrseg.synthgen import SynthSpec, generate_dataset


def random_binary_training_set(rng, n=64, t=4):
    """Full-rank design: binary windows, targets copied from fixed entries.

    Each target bit j equals one chosen window entry, so the targets are an
    exactly linear, noise-free function of the features and a rank-complete
    design recovers them perfectly.
    """
    windows = (rng.random((n, t, t)) < 0.5).astype(float)
    picks = rng.integers(0, t * t, size=t)
    flat = windows.reshape(n, t * t)
    targets = flat[:, picks].astype(int)
    return TrainingSet(windows=windows, targets=targets), picks


class TestFlatten:
    def test_row_major_with_trailing_bias(self):
        out = flatten_window(np.array([[1.0, 0.0], [0.0, 1.0]]))
        np.testing.assert_array_equal(out, [1.0, 0.0, 0.0, 1.0, 1.0])

    def test_rejects_non_square(self):
        with pytest.raises(ShapeMismatchError):
            flatten_window(np.zeros((2, 3)))


class TestTrainingSet:
    def test_from_pairs(self):
        pairs = [(np.eye(2), np.array([1, 1])), (np.ones((2, 2)), np.array([1, 0]))]
        ts = TrainingSet.from_pairs(pairs)
        assert ts.count == 2
        assert ts.throughput == 2

    def test_empty_pairs_rejected(self):
        with pytest.raises(EmptyTrainingSetError):
            TrainingSet.from_pairs([])

    def test_non_binary_targets_rejected(self):
        with pytest.raises(ShapeMismatchError):
            TrainingSet(windows=np.zeros((1, 2, 2)), targets=np.array([[1, 2]]))

    def test_feature_matrix_has_bias_column(self):
        ts = TrainingSet(windows=np.zeros((3, 2, 2)), targets=np.zeros((3, 2), int))
        features = ts.feature_matrix()
        assert features.shape == (3, 5)
        np.testing.assert_array_equal(features[:, -1], 1.0)


class TestStandardizer:
    def test_moments_and_bias_passthrough(self):
        rng = np.random.default_rng(43)
        ts = TrainingSet(
            windows=rng.random((200, 3, 3)),
            targets=np.zeros((200, 3), int),
        )
        std = fit_standardizer(ts)
        assert std.means[-1] == 0.0 and std.stds[-1] == 1.0
        transformed = std.transform(ts.feature_matrix())
        np.testing.assert_allclose(transformed[:, :-1].mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(transformed[:, :-1].std(axis=0), 1.0, atol=1e-12)
        np.testing.assert_array_equal(transformed[:, -1], 1.0)

    def test_zero_variance_feature_gets_unit_std(self):
        windows = np.zeros((5, 2, 2))
        windows[:, 0, 1] = 0.25
        ts = TrainingSet(windows=windows, targets=np.zeros((5, 2), int))
        std = fit_standardizer(ts)
        assert std.stds[1] == 1.0
        transformed = std.transform(ts.feature_matrix())
        np.testing.assert_array_equal(transformed[:, 1], 0.0)


class TestTrainRidge:
    def test_exact_recovery_without_regularization(self):
        rng = np.random.default_rng(47)
        ts, _ = random_binary_training_set(rng)
        features = ts.feature_matrix()
        assert np.linalg.matrix_rank(features) == features.shape[1]
        model = train_ridge(ts, lam=0.0)
        for window, target in zip(ts.windows, ts.targets):
            np.testing.assert_allclose(
                predict(model, window).probs, target, atol=1e-6
            )

    def test_agrees_with_independent_least_squares(self):
        rng = np.random.default_rng(53)
        ts, _ = random_binary_training_set(rng)
        model = train_ridge(ts, lam=0.0)
        oracle, *_ = np.linalg.lstsq(
            ts.feature_matrix(), ts.targets.astype(float), rcond=None
        )
        np.testing.assert_allclose(model.weights, oracle, atol=1e-8)

    def test_solves_the_stated_normal_equations(self):
        rng = np.random.default_rng(59)
        ts = TrainingSet(
            windows=rng.random((80, 4, 4)),
            targets=(rng.random((80, 4)) < 0.5).astype(int),
        )
        lam = 2.5
        model = train_ridge(ts, lam=lam)
        features = ts.feature_matrix()
        penalty = lam * np.eye(17)
        penalty[-1, -1] = 0.0
        lhs = (features.T @ features + penalty) @ model.weights
        rhs = features.T @ ts.targets.astype(float)
        np.testing.assert_allclose(lhs, rhs, atol=1e-8)

    def test_bias_row_is_not_shrunk(self):
        # constant targets are fit exactly through the bias at any lambda
        windows = np.random.default_rng(61).random((50, 2, 2))
        targets = np.tile([1, 0], (50, 1))
        ts = TrainingSet(windows=windows, targets=targets)
        model = train_ridge(ts, lam=1e6)
        for window in windows[:5]:
            np.testing.assert_allclose(predict(model, window).probs, [1, 0], atol=1e-3)

    def test_huge_lambda_approaches_mean_predictor(self):
        rng = np.random.default_rng(67)
        windows = rng.random((40, 2, 2))
        targets = (rng.random((40, 2)) < 0.5).astype(int)
        ts = TrainingSet(windows=windows, targets=targets)
        model = train_ridge(ts, lam=1e9)
        mean_target = targets.mean(axis=0)
        for window in windows[:5]:
            np.testing.assert_allclose(
                predict(model, window).probs, mean_target, atol=1e-4
            )

    def test_symmetric_windows_are_singular_without_regularization(self):
        # mirrored entries duplicate feature columns, so lam=0 must report
        # the singular system instead of quietly pseudo-inverting
        spec = SynthSpec(
            size=4, noise_mean=0.0, noise_var=0.1, groups_mean=2.0, groups_var=1.0,
            count=50, seed=3,
        )
        dataset = generate_dataset(spec)
        pairs = [(m.values, s.bits) for m, s in dataset.train]
        ts = TrainingSet.from_pairs(pairs)
        with pytest.raises(SingularSystemError):
            train_ridge(ts, lam=0.0)
        train_ridge(ts, lam=1.0)

    def test_training_is_deterministic(self):
        rng = np.random.default_rng(71)
        ts = TrainingSet(
            windows=rng.random((60, 4, 4)),
            targets=(rng.random((60, 4)) < 0.5).astype(int),
        )
        first = train_ridge(ts, lam=1.0)
        second = train_ridge(ts, lam=1.0)
        np.testing.assert_array_equal(first.weights, second.weights)

    def test_rejects_empty_and_negative_lambda(self):
        ts = TrainingSet(windows=np.zeros((0, 2, 2)), targets=np.zeros((0, 2), int))
        with pytest.raises(EmptyTrainingSetError):
            train_ridge(ts)
        rng = np.random.default_rng(73)
        good = TrainingSet(
            windows=rng.random((4, 2, 2)), targets=np.zeros((4, 2), int)
        )
        with pytest.raises(ParamConstraintError):
            train_ridge(good, lam=-1.0)

    def test_standardized_training_matches_pre_standardized_data(self):
        rng = np.random.default_rng(79)
        windows = rng.random((120, 3, 3))
        targets = (rng.random((120, 3)) < 0.4).astype(int)
        ts = TrainingSet(windows=windows, targets=targets)
        model_a = train_ridge(ts, lam=0.7, standardize=True)
        std = fit_standardizer(ts)
        flat = std.transform(ts.feature_matrix())[:, :-1]
        ts_pre = TrainingSet(windows=flat.reshape(120, 3, 3), targets=targets)
        model_b = train_ridge(ts_pre, lam=0.7, standardize=False)
        probe = rng.random((10, 3, 3))
        for window in probe:
            standardized = std.transform(flatten_window(window)[None, :])[0, :-1]
            np.testing.assert_allclose(
                predict(model_a, window).probs,
                predict(model_b, standardized.reshape(3, 3)).probs,
                atol=1e-9,
            )


class TestPredict:
    def test_output_is_clamped(self):
        weights = np.zeros((5, 2))
        weights[-1] = [5.0, -5.0]
        model = RidgeModel(throughput=2, weights=weights, lam=1.0)
        out = predict(model, np.zeros((2, 2)))
        np.testing.assert_array_equal(out.probs, [1.0, 0.0])

    def test_rejects_wrong_window_size(self):
        model = RidgeModel(throughput=2, weights=np.zeros((5, 2)), lam=1.0)
        with pytest.raises(ShapeMismatchError):
            predict(model, np.zeros((3, 3)))

    def test_model_shape_validation(self):
        with pytest.raises(ShapeMismatchError):
            RidgeModel(throughput=2, weights=np.zeros((4, 2)), lam=1.0)
