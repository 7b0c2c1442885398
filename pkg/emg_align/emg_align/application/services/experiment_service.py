# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Multi-day experiment orchestration.

Day 1 trains the classifier. Every later day is calibrated against day 1 with
a few repetitions per gesture, projected back into day 1's feature space, and
scored with and without alignment next to a classifier pooled over all days.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import numpy as np
import numpy.typing as npt

from emg_align.application.services.cca_alignment import (
    calibration_subset,
    cca_fit,
    project_day,
    within_day_upper_bound,
)
from emg_align.application.services.drift_simulator import SimulatedDaySource
from emg_align.application.services.svm_classifier import (
    accuracy,
    accuracy_per_gesture,
    svm_predict,
    svm_train,
    train_mask,
)
from emg_align.domain.entities.alignment import CcaMapping
from emg_align.domain.entities.classifier import SvmModel
from emg_align.domain.entities.experiment_config import ExperimentConfig
from emg_align.domain.entities.reports import CorrelationMetrics, DayReport
from emg_align.domain.entities.signal_data import LabeledWindows, concatenate_windows
from emg_align.domain.exceptions import DimensionError, EmgAlignError, ExperimentError, TrainingError
from emg_align.domain.interfaces.day_source import IDaySource

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]
BoolArray = npt.NDArray[np.bool_]


def _pearson(x: FloatArray, y: FloatArray) -> float | None:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom <= 1e-300:
        return None
    return float(xc @ yc) / denom


def correlation_metrics(
    ref_calib: LabeledWindows | FloatArray,
    new_calib: LabeledWindows | FloatArray,
    mapping: CcaMapping,
) -> CorrelationMetrics:
    """
    Channel-wise Pearson correlation of the paired raw streams against the
    mean canonical correlation of the mapping.
    """
    x = ref_calib.features if isinstance(ref_calib, LabeledWindows) else np.asarray(ref_calib, dtype=np.float64)
    y = new_calib.features if isinstance(new_calib, LabeledWindows) else np.asarray(new_calib, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionError(f"calibration matrices differ in shape: {x.shape} vs {y.shape}")

    per_channel: list[float] = []
    for channel in range(x.shape[0]):
        r = _pearson(x[channel], y[channel])
        if r is None:
            logger.warning(f"Channel {channel} has zero variance in calibration data, counting its correlation as 0")
            r = 0.0
        per_channel.append(r)

    unaligned = float(np.mean(per_channel))
    aligned = float(np.mean(mapping.correlations))
    return CorrelationMetrics(aligned=aligned, unaligned=unaligned, gain=aligned - unaligned)


@dataclass(frozen=True)
class DayOutcome:
    """Everything computed for one later day"""
    report: DayReport
    mapping: CcaMapping
    calibration_columns: IntArray
    evaluation_columns: IntArray
    pooled_columns: IntArray
    unaligned: LabeledWindows
    aligned: LabeledWindows


@dataclass(frozen=True)
class ExperimentResult:
    reference: LabeledWindows
    model: SvmModel
    pooled_model: SvmModel
    reference_test_columns: IntArray
    acc_reference: float
    upper_bound: float
    outcomes: list[DayOutcome]

    @property
    def reports(self) -> list[DayReport]:
        return [o.report for o in self.outcomes]


class ExperimentService:
    """Runs the day-1 training, per-day calibration and scoring"""

    def __init__(self, config: ExperimentConfig, source: IDaySource | None = None):
        self.config = config
        self.source = source if source is not None else SimulatedDaySource(config)

    def _train(self, data: LabeledWindows) -> SvmModel:
        svm = self.config.svm
        return svm_train(data, reg_c=svm.reg_c, epochs=svm.epochs, seed=svm.seed, batch_size=svm.batch_size)

    def _stage(self, day_id: str, stage: str, fn, *args):
        try:
            return fn(*args)
        except ExperimentError:
            raise
        except (EmgAlignError, ArithmeticError, ValueError) as e:
            logger.error(f"Day {day_id}: {stage} failed: {e}")
            raise ExperimentError(day_id, stage, e) from e

    @staticmethod
    def _score_reference(model: SvmModel, reference: LabeledWindows, ref_train: BoolArray) -> tuple[float, int]:
        ref_test = reference.select(~ref_train)
        return accuracy(svm_predict(model, ref_test), ref_test.labels), ref_test.windows

    def _upper_bound(self, reference: LabeledWindows) -> float:
        try:
            return within_day_upper_bound(reference, self.config.ridge)
        except EmgAlignError as e:
            logger.warning(f"Within-day upper bound unavailable: {e}")
            return float("nan")

    def run(self) -> ExperimentResult:
        cfg = self.config
        day_count = self.source.day_count
        if day_count < 2:
            raise ExperimentError("1", "load", ValueError(f"need at least two days, source has {day_count}"))

        reference = self._stage("1", "load", self.source.load, 1)
        ref_train = train_mask(reference, cfg.train_fraction)
        model = self._stage("1", "training", self._train, reference.select(ref_train))
        acc_reference, test_windows = self._stage("1", "evaluation", self._score_reference, model, reference, ref_train)
        if acc_reference <= 0.0:
            raise ExperimentError("1", "evaluation", TrainingError("reference accuracy is 0, relative accuracy undefined"))
        logger.info(f"Reference day: held-out accuracy {acc_reference:.4f} on {test_windows} windows")

        upper_bound = self._upper_bound(reference)
        logger.debug(f"Within-day canonical correlation upper bound {upper_bound:.4f}")

        days = [reference]
        for d in range(2, day_count + 1):
            days.append(self._stage(str(d), "load", self.source.load, d))
        masks = [train_mask(day, cfg.train_fraction) for day in days]
        pooled_train = concatenate_windows([day.select(m) for day, m in zip(days, masks)], day="pooled")
        pooled_model = self._stage("pooled", "training", self._train, pooled_train)

        def evaluate(d: int) -> DayOutcome:
            return self._evaluate_day(d, reference, days[d - 1], masks[d - 1], model, pooled_model,
                                      acc_reference, upper_bound)

        indices = list(range(2, day_count + 1))
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                outcomes = list(pool.map(evaluate, indices))
        else:
            outcomes = [evaluate(d) for d in indices]

        return ExperimentResult(
            reference=reference,
            model=model,
            pooled_model=pooled_model,
            reference_test_columns=np.flatnonzero(~ref_train),
            acc_reference=acc_reference,
            upper_bound=upper_bound,
            outcomes=outcomes,
        )

    def _evaluate_day(
        self,
        d: int,
        reference: LabeledWindows,
        day: LabeledWindows,
        day_train: BoolArray,
        model: SvmModel,
        pooled_model: SvmModel,
        acc_reference: float,
        upper_bound: float,
    ) -> DayOutcome:
        cfg = self.config
        day_id = day.day or str(d)
        k = cfg.calibration_reps

        pair = self._stage(day_id, "calibration", calibration_subset, reference, day, k)
        mapping = self._stage(day_id, "alignment", cca_fit, pair.reference, pair.new, cfg.ridge)
        aligned = self._stage(day_id, "projection", project_day, mapping, day)
        metrics = self._stage(day_id, "correlation", correlation_metrics, pair.reference, pair.new, mapping)

        not_calibration = day.repetition_ordinal() >= k
        evaluation_columns = np.flatnonzero(not_calibration)
        pooled_columns = np.flatnonzero(not_calibration & ~day_train)
        if evaluation_columns.size == 0:
            raise ExperimentError(day_id, "evaluation", ValueError("no repetitions left after calibration"))

        truth = day.labels[evaluation_columns]
        predicted_unaligned = svm_predict(model, day.features[:, evaluation_columns])
        predicted_aligned = svm_predict(model, aligned.features[:, evaluation_columns])
        acc_unaligned = accuracy(predicted_unaligned, truth)
        acc_aligned = accuracy(predicted_aligned, truth)
        if pooled_columns.size:
            acc_pooled = accuracy(svm_predict(pooled_model, day.features[:, pooled_columns]),
                                  day.labels[pooled_columns])
        else:
            logger.warning(f"Day {day_id}: no held-out repetitions outside calibration, pooled accuracy is NaN")
            acc_pooled = float("nan")

        report = DayReport(
            day_id=day_id,
            mean_canonical_correlation_aligned=metrics.aligned,
            mean_channelwise_correlation_unaligned=metrics.unaligned,
            correlation_gain=metrics.gain,
            within_day_upper_bound=upper_bound,
            normalized_aligned_correlation=metrics.aligned / upper_bound if upper_bound > 0 else float("nan"),
            acc_unaligned=acc_unaligned,
            acc_aligned=acc_aligned,
            acc_pooled=acc_pooled,
            acc_reference=acc_reference,
            relative_accuracy=acc_aligned / acc_reference,
        )
        logger.info(
            f"Day {day_id}: correlation {metrics.unaligned:.3f} -> {metrics.aligned:.3f}, "
            f"accuracy unaligned {acc_unaligned:.3f} aligned {acc_aligned:.3f} pooled {acc_pooled:.3f}"
        )
        logger.debug(f"Day {day_id}: per-gesture aligned accuracy {accuracy_per_gesture(predicted_aligned, truth)}")
        return DayOutcome(
            report=report,
            mapping=mapping,
            calibration_columns=pair.new_columns,
            evaluation_columns=evaluation_columns,
            pooled_columns=pooled_columns,
            unaligned=day,
            aligned=aligned,
        )


def run_experiment(cfg: ExperimentConfig, source: IDaySource | None = None) -> list[DayReport]:
    """One DayReport per later day, in day order"""
    return ExperimentService(cfg, source).run().reports
