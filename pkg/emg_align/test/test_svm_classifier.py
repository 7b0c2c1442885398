# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

import numpy as np
import pytest

from emg_align.application.services.svm_classifier import (
    accuracy,
    accuracy_per_gesture,
    decision_scores,
    hinge_objective,
    split_by_repetition,
    svm_predict,
    svm_train,
    train_mask,
)
from emg_align.domain.entities.classifier import SvmModel
from emg_align.domain.entities.signal_data import LabeledWindows
from emg_align.domain.exceptions import DimensionError, TrainingError


def test_split_by_repetition_is_six_two(reference_day):
    train, test = split_by_repetition(reference_day)
    assert train.windows == 8 * 6 * 28
    assert test.windows == 8 * 2 * 28
    for g in reference_day.gestures:
        assert train.repetitions_of(g) == [0, 1, 2, 3, 4, 5]
        assert test.repetitions_of(g) == [6, 7]


def test_train_mask_keeps_one_test_repetition(small_day):
    mask = train_mask(small_day, train_fraction=0.99)
    assert set(np.unique(small_day.repetition[~mask])) == {3}


def test_separable_clusters_are_learned(reference_day):
    train, test = split_by_repetition(reference_day)
    model = svm_train(train, reg_c=1.0)
    assert model.classes == tuple(range(8))
    assert accuracy(svm_predict(model, test), test.labels) >= 0.95


def test_training_is_deterministic(small_day):
    first = svm_train(small_day, epochs=20, seed=7)
    second = svm_train(small_day, epochs=20, seed=7)
    assert np.array_equal(first.weights, second.weights)
    assert np.array_equal(first.biases, second.biases)
    other = svm_train(small_day, epochs=20, seed=8)
    assert not np.array_equal(first.weights, other.weights)


def test_ties_go_to_smallest_class():
    model = SvmModel(
        weights=np.zeros((3, 2)),
        biases=np.zeros(3),
        reg_c=1.0,
        classes=(2, 0, 1),
        feature_means=np.zeros(2),
        feature_scales=np.ones(2),
    )
    np.testing.assert_array_equal(svm_predict(model, np.ones((2, 4))), [0, 0, 0, 0])


def test_decision_scores_shape_and_mismatch(small_day):
    model = svm_train(small_day, epochs=5)
    assert decision_scores(model, small_day.features).shape == (8, small_day.windows)
    with pytest.raises(DimensionError):
        decision_scores(model, small_day.features[:7])


def test_single_class_cannot_train(small_day):
    with pytest.raises(TrainingError):
        svm_train(small_day.select(small_day.labels == 0))
    with pytest.raises(TrainingError):
        svm_train(small_day, reg_c=0.0)


def test_accuracy_helpers():
    assert accuracy([0, 1, 2, 2], [0, 1, 1, 2]) == pytest.approx(0.75)
    assert accuracy_per_gesture([0, 1, 2, 2], [0, 1, 1, 2]) == {0: 1.0, 1: 0.5, 2: 1.0}
    with pytest.raises(DimensionError):
        accuracy([0, 1], [0])


def test_constant_feature_is_tolerated():
    features = np.vstack([np.r_[np.zeros(20), np.ones(20)], np.full(40, 2.0)])
    day = LabeledWindows(features, np.r_[np.zeros(20), np.ones(20)], np.zeros(40))
    model = svm_train(day, epochs=20)
    assert model.feature_scales[1] == 1.0
    assert np.all(np.isfinite(decision_scores(model, day.features)))


def test_hinge_objective_of_zero_model(small_day):
    model = SvmModel(
        weights=np.zeros((8, 8)),
        biases=np.zeros(8),
        reg_c=2.0,
        classes=tuple(range(8)),
        feature_means=np.zeros(8),
        feature_scales=np.ones(8),
    )
    assert hinge_objective(model, small_day) == pytest.approx(2.0 * 8 * small_day.windows)


def test_standardize_flag_matches_manual_standardization(small_day):
    model = svm_train(small_day, epochs=20)
    z = (small_day.features - model.feature_means[:, None]) / model.feature_scales[:, None]
    np.testing.assert_allclose(decision_scores(model, z, standardize=False), decision_scores(model, small_day.features))
    np.testing.assert_array_equal(svm_predict(model, z, standardize=False), svm_predict(model, small_day))


def test_scores_ignore_weight_null_space(small_day, rng):
    pair = small_day.select(np.isin(small_day.labels, [0, 1]))
    model = svm_train(pair, epochs=50)
    _, _, vt = np.linalg.svd(model.weights)
    null = vt[model.weights.shape[0]:].T
    z = (pair.features - model.feature_means[:, None]) / model.feature_scales[:, None]
    shifted = z + null @ rng.normal(scale=10.0, size=(null.shape[1], pair.windows))
    np.testing.assert_allclose(
        decision_scores(model, shifted, standardize=False),
        decision_scores(model, z, standardize=False),
        atol=1e-9,
    )
    np.testing.assert_array_equal(svm_predict(model, shifted, standardize=False), svm_predict(model, pair))


def test_training_lowers_the_objective(small_day):
    trained = svm_train(small_day, reg_c=1.0, epochs=50)
    zero = SvmModel(
        weights=np.zeros_like(trained.weights),
        biases=np.zeros_like(trained.biases),
        reg_c=trained.reg_c,
        classes=trained.classes,
        feature_means=trained.feature_means,
        feature_scales=trained.feature_scales,
    )
    assert hinge_objective(trained, small_day) <= hinge_objective(zero, small_day)


def test_two_tight_clusters_are_fit_exactly(rng):
    n = 8
    features = np.hstack([
        5.0 + 0.1 * rng.normal(size=(n, 100)),
        -5.0 + 0.1 * rng.normal(size=(n, 100)),
    ])
    labels = np.r_[np.zeros(100), np.ones(100)]
    day = LabeledWindows(features, labels, np.zeros(200))
    model = svm_train(day)
    assert accuracy(svm_predict(model, day), labels) == 1.0
