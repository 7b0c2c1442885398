# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

import numpy as np
import pandas as pd
import pytest

from emg_align.application.services.cca_alignment import calibration_subset, cca_fit
from emg_align.application.services.svm_classifier import svm_train
from emg_align.domain.constants import protocol
from emg_align.domain.entities.experiment_config import DatasetManifest, FilterSettings
from emg_align.domain.entities.signal_data import RawRecording, SignalMatrix
from emg_align.domain.exceptions import IngestionError, ParameterError
from emg_align.infrastructure.storage.day_csv import (
    FEATURES_FILE,
    load_day,
    read_day_meta,
    write_day,
    write_raw_day,
)
from emg_align.infrastructure.storage.day_sources import DirectoryDaySource
from emg_align.infrastructure.storage.model_files import load_mapping, load_model, save_mapping, save_model


def test_feature_day_reloads_exactly(small_day, tmp_path):
    write_day(small_day, tmp_path / "day_01", seed=3)
    loaded = load_day(tmp_path / "day_01")
    np.testing.assert_array_equal(loaded.features, small_day.features)
    np.testing.assert_array_equal(loaded.labels, small_day.labels)
    np.testing.assert_array_equal(loaded.repetition, small_day.repetition)
    np.testing.assert_array_equal(loaded.window, small_day.window)
    assert loaded.day == "1"
    meta = read_day_meta(tmp_path / "day_01")
    assert meta["seed"] == 3
    assert meta["mode"] == "features"


def test_day_id_falls_back_to_directory_name(small_day, tmp_path):
    path = write_day(small_day, tmp_path / "monday")
    (path / "day.yaml").unlink()
    assert load_day(path).day == "monday"


def test_non_finite_value_reports_row(small_day, tmp_path):
    path = write_day(small_day, tmp_path / "day")
    frame = pd.read_csv(path / FEATURES_FILE)
    frame.loc[16, "ch3"] = np.nan
    frame.to_csv(path / FEATURES_FILE, index=False)
    with pytest.raises(IngestionError) as excinfo:
        load_day(path)
    assert excinfo.value.row == 17
    assert "ch3" in str(excinfo.value)
    assert FEATURES_FILE in str(excinfo.value)


def test_text_value_is_rejected(small_day, tmp_path):
    path = write_day(small_day, tmp_path / "day")
    frame = pd.read_csv(path / FEATURES_FILE).astype({"ch0": object})
    frame.loc[4, "ch0"] = "abc"
    frame.to_csv(path / FEATURES_FILE, index=False)
    with pytest.raises(IngestionError) as excinfo:
        load_day(path)
    assert excinfo.value.row == 5


def test_missing_column_is_rejected(small_day, tmp_path):
    path = write_day(small_day, tmp_path / "day")
    frame = pd.read_csv(path / FEATURES_FILE).drop(columns=["repetition"])
    frame.to_csv(path / FEATURES_FILE, index=False)
    with pytest.raises(IngestionError, match="repetition"):
        load_day(path)


def test_gap_in_channels_is_rejected(small_day, tmp_path):
    path = write_day(small_day, tmp_path / "day")
    frame = pd.read_csv(path / FEATURES_FILE).drop(columns=["ch2"])
    frame.to_csv(path / FEATURES_FILE, index=False)
    with pytest.raises(IngestionError, match="contiguous"):
        load_day(path)


def test_label_set_must_be_contiguous(small_day, tmp_path):
    path = write_day(small_day.select(small_day.labels != 3), tmp_path / "day")
    with pytest.raises(IngestionError, match="contiguous"):
        load_day(path)


def test_missing_file(tmp_path):
    (tmp_path / "empty").mkdir()
    with pytest.raises(IngestionError, match="not found"):
        load_day(tmp_path / "empty")


def _raw_recording(fs: float, gestures: int = 2, reps: int = 2) -> RawRecording:
    rng = np.random.default_rng(5)
    trial_len, rest_len = int(3 * fs), int(fs)
    signal, labels, repetition, trial = [], [], [], []
    trial_id = 0
    for g in range(gestures):
        for r in range(reps):
            signal += [rng.normal(scale=1.0 + g, size=(4, trial_len)), rng.normal(scale=0.1, size=(4, rest_len))]
            labels += [np.full(trial_len, g), np.full(rest_len, protocol.REST_LABEL)]
            repetition += [np.full(trial_len, r), np.full(rest_len, r)]
            trial += [np.full(trial_len + rest_len, trial_id)]
            trial_id += 1
    return RawRecording(
        signal=SignalMatrix(np.concatenate(signal, axis=1), fs),
        labels=np.concatenate(labels),
        repetition=np.concatenate(repetition),
        trial=np.concatenate(trial),
        day="raw",
    )


def test_raw_day_is_filtered_and_windowed(tmp_path):
    path = write_raw_day(_raw_recording(1000.0), tmp_path / "raw_day")
    manifest = DatasetManifest(
        days=["raw_day"],
        mode="raw",
        sample_rate_hz=1000.0,
        filters=FilterSettings(band_high_hz=400.0),
        root=tmp_path,
    )
    day = load_day(path, manifest)
    assert day.day == "raw"
    assert day.windows == 4 * 28
    assert day.gestures == [0, 1]
    assert day.repetitions_of(1) == [0, 1]
    assert np.all(day.features >= 0)


def test_model_file_reloads_exactly(small_day, tmp_path):
    model = svm_train(small_day, epochs=20)
    save_model(model, tmp_path / "model.csv")
    loaded = load_model(tmp_path / "model.csv")
    np.testing.assert_array_equal(loaded.weights, model.weights)
    np.testing.assert_array_equal(loaded.biases, model.biases)
    np.testing.assert_array_equal(loaded.feature_means, model.feature_means)
    np.testing.assert_array_equal(loaded.feature_scales, model.feature_scales)
    assert loaded.classes == model.classes
    assert loaded.reg_c == model.reg_c
    assert loaded.epochs == 20


def test_mapping_file_reloads_exactly(small_day, tmp_path):
    pair = calibration_subset(small_day, small_day, 2)
    mapping = cca_fit(pair.reference, pair.new, ridge=1e-6)
    save_mapping(mapping, tmp_path / "mapping.csv")
    loaded = load_mapping(tmp_path / "mapping.csv")
    np.testing.assert_array_equal(loaded.a, mapping.a)
    np.testing.assert_array_equal(loaded.b, mapping.b)
    np.testing.assert_array_equal(loaded.correlations, mapping.correlations)
    np.testing.assert_array_equal(loaded.mean_ref, mapping.mean_ref)
    assert loaded.ridge == mapping.ridge
    assert loaded.centered is True


def test_truncated_model_file_is_rejected(small_day, tmp_path):
    save_model(svm_train(small_day, epochs=5), tmp_path / "model.csv")
    frame = pd.read_csv(tmp_path / "model.csv")
    frame[frame["block"] != "weights"].to_csv(tmp_path / "model.csv", index=False)
    with pytest.raises(IngestionError, match="weights"):
        load_model(tmp_path / "model.csv")


def test_directory_source_merges_sessions(small_day, tmp_path):
    for name in ["a_am", "a_pm", "b_am", "b_pm"]:
        write_day(small_day, tmp_path / name)
    manifest = DatasetManifest(days=["a_am", "a_pm", "b_am", "b_pm"], sessions_per_day=2, root=tmp_path)
    source = DirectoryDaySource(manifest)
    assert source.day_count == 2
    day = source.load(2)
    assert day.day == "2"
    assert day.windows == 2 * small_day.windows
    assert day.repetitions_of(0) == list(range(8))
    np.testing.assert_array_equal(day.repetition[small_day.windows:], small_day.repetition + 4)
    assert source.load(2) is day
    with pytest.raises(ParameterError):
        source.load(3)


def test_directory_source_single_session(small_day, tmp_path):
    write_day(small_day, tmp_path / "first")
    write_day(small_day, tmp_path / "second")
    source = DirectoryDaySource(DatasetManifest(days=["first", "second"], root=tmp_path))
    assert source.day_count == 2
    assert source.reference().day == "1"
    assert source.load(2).day == "2"
