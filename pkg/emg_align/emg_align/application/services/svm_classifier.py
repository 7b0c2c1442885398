# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
One-vs-rest linear soft-margin SVM trained with projected sub-gradient steps.

Each class solves min 1/2 |w|^2 + C sum_i max(0, 1 - y_i (w.x_i + b)) in the
equivalent form lambda/2 |w|^2 + mean hinge with lambda = 1 / (C N). Steps use
eta_t = 1 / (lambda t) over seeded shuffled mini-batches; the bias rides along
as a constant input feature.
"""

import logging
import numpy as np
import numpy.typing as npt

from emg_align.domain.entities.classifier import SvmModel
from emg_align.domain.entities.signal_data import LabeledWindows
from emg_align.domain.exceptions import DataError, DimensionError, TrainingError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


def _standardization(features: FloatArray) -> tuple[FloatArray, FloatArray]:
    means = features.mean(axis=1)
    scales = features.std(axis=1)
    scales[scales <= 1e-12] = 1.0
    return means, scales


def _one_vs_rest_targets(labels: IntArray, classes: tuple[int, ...]) -> FloatArray:
    return np.where(labels[:, None] == np.asarray(classes)[None, :], 1.0, -1.0)


def svm_train(
    train: LabeledWindows,
    reg_c: float = 1.0,
    epochs: int = 200,
    seed: int = 42,
    batch_size: int = 32,
) -> SvmModel:
    """Deterministic given (data, seed)"""
    if not np.all(np.isfinite(train.features)):
        raise DataError("training features are not finite")
    classes = tuple(train.gestures)
    if len(classes) < 2:
        raise TrainingError(f"need at least two classes to train, got {list(classes)}")
    if reg_c <= 0 or epochs < 1 or batch_size < 1:
        raise TrainingError(f"invalid training parameters C={reg_c} epochs={epochs} batch={batch_size}")

    means, scales = _standardization(train.features)
    standardized = ((train.features - means[:, None]) / scales[:, None]).T
    inputs = np.hstack([standardized, np.ones((train.windows, 1))])
    targets = _one_vs_rest_targets(train.labels, classes)

    count = train.windows
    lam = 1.0 / (reg_c * count)
    radius = 1.0 / np.sqrt(lam)
    weights = np.zeros((len(classes), inputs.shape[1]))
    rng = np.random.default_rng(seed)

    step = 0
    for _ in range(epochs):
        order = rng.permutation(count)
        for start in range(0, count, batch_size):
            batch = order[start:start + batch_size]
            step += 1
            eta = 1.0 / (lam * step)
            x = inputs[batch]
            y = targets[batch]
            violated = (y * (x @ weights.T)) < 1.0
            subgradient = ((y * violated).T @ x) / batch.shape[0]
            weights *= 1.0 - eta * lam
            weights += eta * subgradient
            norms = np.linalg.norm(weights, axis=1, keepdims=True)
            weights *= np.minimum(1.0, radius / np.maximum(norms, np.finfo(float).tiny))

    model = SvmModel(
        weights=weights[:, :-1],
        biases=weights[:, -1],
        reg_c=reg_c,
        classes=classes,
        feature_means=means,
        feature_scales=scales,
        seed=seed,
        epochs=epochs,
    )
    logger.info(f"Trained {len(classes)}-class SVM on {count} windows ({epochs} epochs, C={reg_c})")
    return model


def decision_scores(model: SvmModel, features: FloatArray, standardize: bool = True) -> FloatArray:
    """G x T class scores"""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != model.channels:
        raise DimensionError(f"features have shape {x.shape}, model expects {model.channels} rows")
    if standardize:
        x = (x - model.feature_means[:, None]) / model.feature_scales[:, None]
    return model.weights @ x + model.biases[:, None]


def svm_predict(
    model: SvmModel,
    features: LabeledWindows | FloatArray,
    standardize: bool = True,
) -> IntArray:
    """Argmax class per window; ties go to the smallest gesture id"""
    matrix = features.features if isinstance(features, LabeledWindows) else features
    scores = decision_scores(model, matrix, standardize)
    order = np.argsort(model.classes, kind="stable")
    winners = np.argmax(scores[order], axis=0)
    return np.asarray(model.classes, dtype=np.int64)[order][winners]


def hinge_objective(model: SvmModel, data: LabeledWindows) -> float:
    """Sum over classes of 1/2 |w|^2 + C * total hinge loss"""
    scores = decision_scores(model, data.features)
    targets = _one_vs_rest_targets(data.labels, model.classes).T
    hinge = np.maximum(0.0, 1.0 - targets * scores).sum()
    return float(0.5 * np.sum(model.weights ** 2) + model.reg_c * hinge)


def accuracy(predicted: npt.ArrayLike, truth: npt.ArrayLike) -> float:
    """Fraction of exact matches"""
    p = np.asarray(predicted).reshape(-1)
    t = np.asarray(truth).reshape(-1)
    if p.shape[0] != t.shape[0] or p.shape[0] == 0:
        raise DimensionError(f"cannot compare {p.shape[0]} predictions with {t.shape[0]} labels")
    return float(np.mean(p == t))


def accuracy_per_gesture(predicted: npt.ArrayLike, truth: npt.ArrayLike) -> dict[int, float]:
    """Recall of each gesture present in truth"""
    p = np.asarray(predicted).reshape(-1)
    t = np.asarray(truth).reshape(-1)
    if p.shape[0] != t.shape[0]:
        raise DimensionError(f"cannot compare {p.shape[0]} predictions with {t.shape[0]} labels")
    return {int(g): float(np.mean(p[t == g] == g)) for g in np.unique(t)}


def train_mask(day: LabeledWindows, train_fraction: float = 0.75) -> npt.NDArray[np.bool_]:
    """Per gesture, the first share of repetitions (at least one, at most all but one)"""
    ordinal = day.repetition_ordinal()
    counts = {g: len(day.repetitions_of(g)) for g in day.gestures}
    cut = {g: min(max(1, int(round(c * train_fraction))), max(c - 1, 1)) for g, c in counts.items()}
    limits = np.array([cut[int(g)] for g in day.labels], dtype=np.int64)
    return ordinal < limits


def split_by_repetition(day: LabeledWindows, train_fraction: float = 0.75) -> tuple[LabeledWindows, LabeledWindows]:
    """6 of 8 repetitions train, the last 2 test, at the default fraction"""
    in_train = train_mask(day, train_fraction)
    return day.select(in_train), day.select(~in_train)
