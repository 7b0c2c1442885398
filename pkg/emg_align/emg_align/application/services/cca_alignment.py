# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Day-to-day alignment with canonical correlation analysis.

A mapping is fitted on column-paired calibration windows of the reference day
and a new day; the whole new day is then projected back into the reference
feature space with (A^T)^+ B^T.
"""

import logging
import numpy as np
import numpy.typing as npt

from emg_align.domain.entities.alignment import CalibrationPair, CcaMapping
from emg_align.domain.entities.signal_data import LabeledWindows
from emg_align.domain.exceptions import CalibrationCoverageError, DimensionError, PairingError
from emg_align.domain.math import linalg

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def _features(data: LabeledWindows | FloatArray) -> FloatArray:
    if isinstance(data, LabeledWindows):
        return data.features
    return linalg.as_matrix(data, "features")


def relative_ridge(cov: FloatArray, ridge: float) -> float:
    """Absolute ridge: ridge * trace(C) / n"""
    return ridge * float(np.trace(cov)) / cov.shape[0]


RIDGE_DOMINATED_VARIANCE = 0.5


def _unit_variates(directions: FloatArray, cov: FloatArray) -> FloatArray:
    """
    Columns have unit variance under cov + ridge after whitening. Columns whose
    variance under cov alone stays above RIDGE_DOMINATED_VARIANCE are rescaled to
    unit variance under cov; the rest lie in the (near) null space of cov and
    keep the regularized scale.
    """
    variance = np.einsum("ij,ik,kj->j", directions, cov, directions)
    return directions / np.sqrt(np.where(variance > RIDGE_DOMINATED_VARIANCE, variance, 1.0))


def cca_fit(
    ref_calib: LabeledWindows | FloatArray,
    new_calib: LabeledWindows | FloatArray,
    ridge: float = 1e-6,
    center: bool = True,
) -> CcaMapping:
    """
    Fit canonical directions A (reference) and B (new day).

    ridge is relative: each covariance gets ridge * trace(C) / n added to its
    diagonal before whitening. Directions carried by the data are rescaled to
    unit variance under the unregularized covariances; directions in the null
    space of a covariance (a flat channel) keep the regularized scale. The
    reported correlations are those of the final variates.
    """
    x = _features(ref_calib)
    y = _features(new_calib)
    if x.shape[0] != y.shape[0]:
        raise DimensionError(f"channel counts differ: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[1] != y.shape[1]:
        raise PairingError(f"calibration windows are not paired: {x.shape[1]} vs {y.shape[1]} columns")
    n, t = x.shape
    if t <= n:
        raise PairingError(f"need more paired windows ({t}) than channels ({n})")

    mean_ref = x.mean(axis=1) if center else np.zeros(n)
    mean_new = y.mean(axis=1) if center else np.zeros(n)
    xc = x - mean_ref[:, None]
    yc = y - mean_new[:, None]

    c_xx = linalg.covariance(xc, xc)
    c_yy = linalg.covariance(yc, yc)
    c_xy = linalg.covariance(xc, yc)
    w_x = linalg.inv_sqrt_sym(c_xx, relative_ridge(c_xx, ridge))
    w_y = linalg.inv_sqrt_sym(c_yy, relative_ridge(c_yy, ridge))

    omega = w_x @ c_xy @ w_y
    decomposition = linalg.svd(omega)
    a = _unit_variates(w_x @ decomposition.u, c_xx)
    b = _unit_variates(w_y @ decomposition.vt.T, c_yy)
    correlations = np.clip(np.einsum("ij,ik,kj->j", a, c_xy, b), 0.0, 1.0)

    order = np.argsort(-correlations, kind="stable")
    mapping = CcaMapping(
        a=a[:, order],
        b=b[:, order],
        correlations=correlations[order],
        mean_ref=mean_ref,
        mean_new=mean_new,
        ridge=ridge,
        centered=center,
    )
    logger.debug(f"CCA fit on {t} paired windows, correlations {np.round(mapping.correlations, 4).tolist()}")
    return mapping


def cca_project(mapping: CcaMapping, new_day: LabeledWindows | FloatArray) -> FloatArray:
    """(A^T)^+ B^T (D - mean_new) + mean_ref"""
    d = _features(new_day)
    if d.shape[0] != mapping.channels:
        raise DimensionError(f"day has {d.shape[0]} channels, mapping expects {mapping.channels}")
    back = linalg.pinv(mapping.a.T) @ mapping.b.T
    return back @ (d - mapping.mean_new[:, None]) + mapping.mean_ref[:, None]


def project_day(mapping: CcaMapping, new_day: LabeledWindows) -> LabeledWindows:
    """Aligned copy of a day with annotations preserved"""
    return new_day.with_features(cca_project(mapping, new_day))


def calibration_subset(
    reference: LabeledWindows,
    new_day: LabeledWindows,
    reps_per_gesture: int = 2,
) -> CalibrationPair:
    """
    Pair calibration windows across two days.

    The first reps_per_gesture repetitions of each gesture are taken from both
    days; the k-th repetition of a gesture on one day pairs with the k-th on the
    other, window by window, each block truncated to the shorter of the two.
    """
    if reps_per_gesture < 1:
        raise CalibrationCoverageError([], reps_per_gesture)
    gestures = sorted(set(reference.gestures) | set(new_day.gestures))
    missing = [
        g for g in gestures
        if len(reference.repetitions_of(g)) < reps_per_gesture
        or len(new_day.repetitions_of(g)) < reps_per_gesture
    ]
    if missing:
        raise CalibrationCoverageError(missing, reps_per_gesture)

    ref_columns: list[npt.NDArray[np.int64]] = []
    new_columns: list[npt.NDArray[np.int64]] = []
    for gesture in gestures:
        ref_reps = reference.repetitions_of(gesture)[:reps_per_gesture]
        new_reps = new_day.repetitions_of(gesture)[:reps_per_gesture]
        for ref_rep, new_rep in zip(ref_reps, new_reps):
            ref_idx = _block_columns(reference, gesture, ref_rep)
            new_idx = _block_columns(new_day, gesture, new_rep)
            size = min(ref_idx.shape[0], new_idx.shape[0])
            ref_columns.append(ref_idx[:size])
            new_columns.append(new_idx[:size])

    ref_selected = np.concatenate(ref_columns)
    new_selected = np.concatenate(new_columns)
    return CalibrationPair(
        reference=reference.select(ref_selected),
        new=new_day.select(new_selected),
        reps_per_gesture=reps_per_gesture,
        reference_columns=ref_selected,
        new_columns=new_selected,
    )


def _block_columns(day: LabeledWindows, gesture: int, repetition: int) -> npt.NDArray[np.int64]:
    columns = np.flatnonzero((day.labels == gesture) & (day.repetition == repetition))
    return columns[np.argsort(day.window[columns], kind="stable")]


def split_day_halves(day: LabeledWindows) -> tuple[LabeledWindows, LabeledWindows]:
    """First and second half of each gesture's repetitions, as two pseudo-days"""
    ordinal = day.repetition_ordinal()
    counts = {g: len(day.repetitions_of(g)) for g in day.gestures}
    half = np.array([counts[int(g)] // 2 for g in day.labels], dtype=np.int64)
    first = ordinal < half
    second = (ordinal >= half) & (ordinal < 2 * half)
    return day.select(first, day=f"{day.day}a"), day.select(second, day=f"{day.day}b")


def within_day_upper_bound(day: LabeledWindows, ridge: float = 1e-6) -> float:
    """Mean canonical correlation between the two halves of a single day"""
    first, second = split_day_halves(day)
    reps = min(min(len(first.repetitions_of(g)) for g in first.gestures),
               min(len(second.repetitions_of(g)) for g in second.gestures))
    pair = calibration_subset(first, second, reps)
    return float(np.mean(cca_fit(pair.reference, pair.new, ridge).correlations))
