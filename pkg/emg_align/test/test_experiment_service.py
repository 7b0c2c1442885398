# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

import logging
import numpy as np
import pytest

from emg_align.application.services.cca_alignment import cca_fit
from emg_align.application.services.drift_simulator import SimulatedDaySource
from emg_align.application.services.experiment_service import (
    ExperimentService,
    correlation_metrics,
    run_experiment,
)
from emg_align.application.utils.diagnostics import embed_2d
from emg_align.domain.entities.experiment_config import DriftConfig, ExperimentConfig
from emg_align.domain.entities.signal_data import LabeledWindows
from emg_align.domain.exceptions import CalibrationCoverageError, DimensionError, ExperimentError
from emg_align.domain.interfaces.day_source import IDaySource
from emg_align.infrastructure.reporting.report_writer import emit_report


@pytest.fixture(scope="module")
def default_result():
    """Ten simulated days, rotation drift of magnitude 1, seed 42"""
    return ExperimentService(ExperimentConfig()).run()


def test_default_run_keeps_accuracy(default_result):
    reports = default_result.reports
    assert len(reports) == 9
    assert [r.day_id for r in reports] == [str(d) for d in range(2, 11)]
    assert default_result.acc_reference >= 0.95
    assert np.mean([r.acc_unaligned for r in reports]) <= 0.5
    assert all(r.relative_accuracy >= 0.90 for r in reports)
    assert np.mean([r.relative_accuracy for r in reports]) >= 0.95
    for r in reports:
        assert r.acc_reference == default_result.acc_reference
        assert r.relative_accuracy == pytest.approx(r.acc_aligned / r.acc_reference)
        for value in (r.acc_unaligned, r.acc_aligned, r.acc_pooled):
            assert 0.0 <= value <= 1.0


def test_default_run_gains_correlation(default_result):
    reports = default_result.reports
    assert all(r.mean_canonical_correlation_aligned > r.mean_channelwise_correlation_unaligned for r in reports)
    assert np.mean([r.correlation_gain for r in reports]) >= 0.2
    for r in reports:
        assert r.correlation_gain == pytest.approx(
            r.mean_canonical_correlation_aligned - r.mean_channelwise_correlation_unaligned)
        assert 0.0 < r.within_day_upper_bound <= 1.0
        assert r.normalized_aligned_correlation == pytest.approx(
            r.mean_canonical_correlation_aligned / r.within_day_upper_bound)


def test_calibration_repetitions_never_evaluated(default_result):
    for outcome in default_result.outcomes:
        assert np.intersect1d(outcome.calibration_columns, outcome.evaluation_columns).size == 0
        assert np.intersect1d(outcome.calibration_columns, outcome.pooled_columns).size == 0
        assert np.all(np.isin(outcome.pooled_columns, outcome.evaluation_columns))
        ordinal = outcome.unaligned.repetition_ordinal()
        assert np.all(ordinal[outcome.calibration_columns] < 2)
        assert np.all(ordinal[outcome.evaluation_columns] >= 2)


def test_zero_drift_changes_nothing():
    config = ExperimentConfig(days=2, drift=DriftConfig(magnitude=0.0, noise_std=0.0))
    result = ExperimentService(config).run()
    (report,) = result.reports
    assert abs(report.acc_aligned - report.acc_unaligned) < 0.02
    np.testing.assert_allclose(result.outcomes[0].mapping.correlations, 1.0, atol=1e-6)
    assert report.acc_unaligned == pytest.approx(report.acc_reference, abs=0.02)


def test_summary_is_byte_identical_across_runs(small_config, tmp_path):
    first = emit_report(run_experiment(small_config), tmp_path / "a")[0].read_bytes()
    second = emit_report(run_experiment(small_config), tmp_path / "b")[0].read_bytes()
    parallel = small_config.model_copy(update={"workers": 3})
    third = emit_report(run_experiment(parallel), tmp_path / "c")[0].read_bytes()
    assert first == second == third


class _MissingGestureSource(IDaySource):
    def __init__(self, config: ExperimentConfig):
        self.inner = SimulatedDaySource(config)

    @property
    def day_count(self) -> int:
        return self.inner.day_count

    def load(self, day_index: int) -> LabeledWindows:
        day = self.inner.load(day_index)
        if day_index == 3:
            return day.select(day.labels != 4)
        return day


def test_stage_errors_carry_day_context(small_config):
    with pytest.raises(ExperimentError) as excinfo:
        ExperimentService(small_config, _MissingGestureSource(small_config)).run()
    assert excinfo.value.day_id == "3"
    assert excinfo.value.stage == "calibration"
    assert isinstance(excinfo.value.__cause__, CalibrationCoverageError)


class _SingleRepetitionSource(_MissingGestureSource):
    def load(self, day_index: int) -> LabeledWindows:
        day = self.inner.load(day_index)
        if day_index == 1:
            return day.select(day.repetition == 0)
        return day


def test_empty_reference_test_split_is_an_evaluation_error(small_config):
    with pytest.raises(ExperimentError) as excinfo:
        ExperimentService(small_config, _SingleRepetitionSource(small_config)).run()
    assert excinfo.value.day_id == "1"
    assert excinfo.value.stage == "evaluation"
    assert isinstance(excinfo.value.__cause__, DimensionError)


def test_correlation_metrics_identity(reference_day):
    x = reference_day.features[:, :448]
    metrics = correlation_metrics(x, x, cca_fit(x, x))
    assert metrics.aligned == pytest.approx(1.0, abs=1e-6)
    assert metrics.unaligned == pytest.approx(1.0, abs=1e-6)
    assert metrics.gain == pytest.approx(0.0, abs=1e-6)


def test_correlation_metrics_zero_variance_channel(reference_day, caplog):
    x = reference_day.features[:, :448]
    mapping = cca_fit(x, x)
    flat = x.copy()
    flat[2] = 1.0
    with caplog.at_level(logging.WARNING):
        metrics = correlation_metrics(x, flat, mapping)
    assert "Channel 2" in caplog.text
    assert metrics.unaligned == pytest.approx(7.0 / 8.0, abs=1e-6)
    with pytest.raises(DimensionError):
        correlation_metrics(x, x[:, :10], mapping)


def test_embedding_of_aligned_day_overlaps_reference(default_result):
    outcome = default_result.outcomes[0]
    embedding = embed_2d(
        default_result.reference,
        {"unaligned": outcome.unaligned, "aligned": outcome.aligned},
        gestures=[0, 1],
    )
    sources = np.asarray(embedding.source)
    assert set(sources) == {"reference", "unaligned", "aligned"}
    assert set(np.unique(embedding.label)) == {0, 1}
    assert embedding.x.shape == embedding.y.shape == sources.shape

    def centroid(name: str, gesture: int) -> np.ndarray:
        keep = (sources == name) & (embedding.label == gesture)
        return np.array([embedding.x[keep].mean(), embedding.y[keep].mean()])

    for gesture in (0, 1):
        aligned_gap = np.linalg.norm(centroid("aligned", gesture) - centroid("reference", gesture))
        unaligned_gap = np.linalg.norm(centroid("unaligned", gesture) - centroid("reference", gesture))
        assert aligned_gap < unaligned_gap
