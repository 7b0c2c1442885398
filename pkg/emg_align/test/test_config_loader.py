# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

from pathlib import Path
import pytest
from pydantic import ValidationError

from emg_align.domain.entities.experiment_config import DatasetManifest, ExperimentConfig, GeometryConfig
from emg_align.domain.exceptions import ConfigError
from emg_align.infrastructure.config.config_loader import (
    apply_overrides,
    default_config_path,
    load_experiment_config,
    load_manifest,
    write_manifest,
)


def test_yaml_config_is_loaded(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(
        "days: 4\n"
        "seed: 11\n"
        "drift:\n"
        "  kind: general-linear\n"
        "  magnitude: 0.5\n"
        "svm:\n"
        "  epochs: 30\n"
    )
    config = load_experiment_config(path)
    assert config.days == 4
    assert config.drift.kind == "general_linear"
    assert config.drift.magnitude == 0.5
    assert config.svm.epochs == 30
    assert config.calibration_reps == 2


def test_shipped_config_matches_defaults():
    path = default_config_path()
    if not path.exists():
        pytest.skip("experiment.yaml is not installed next to the package")
    assert load_experiment_config(path) == ExperimentConfig()


def test_noise_defaults_to_fraction_of_spread():
    assert ExperimentConfig().noise_std == pytest.approx(0.25 * 0.15)
    assert ExperimentConfig(drift={"noise_std": 0.0}).noise_std == 0.0


@pytest.mark.parametrize("text, match", [
    ("days: [1, 2\n", "invalid YAML"),
    ("- 1\n- 2\n", "mapping"),
    ("days: 1\n", "days"),
    ("drift:\n  kind: shear\n", "kind"),
    ("calibration_reps: 9\n", "calibration_reps"),
])
def test_bad_config_raises_config_error(tmp_path, text, match):
    path = tmp_path / "experiment.yaml"
    path.write_text(text)
    with pytest.raises(ConfigError, match=match):
        load_experiment_config(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_experiment_config(tmp_path / "absent.yaml")


def test_calibration_cannot_use_every_repetition_twice():
    with pytest.raises(ValidationError):
        ExperimentConfig(calibration_reps=5, geometry=GeometryConfig(reps_per_gesture=4))


@pytest.mark.parametrize("calibration_reps, reps_per_gesture", [(4, 4), (1, 1)])
def test_evaluation_keeps_a_held_out_repetition(calibration_reps, reps_per_gesture):
    with pytest.raises(ValidationError):
        ExperimentConfig(calibration_reps=calibration_reps, geometry=GeometryConfig(reps_per_gesture=reps_per_gesture))
    ExperimentConfig(calibration_reps=1, geometry=GeometryConfig(reps_per_gesture=2))


def test_overrides_apply_dotted_keys():
    config = apply_overrides(ExperimentConfig(), {
        "drift.magnitude": 0.3,
        "drift.kind": "offset-only",
        "days": 5,
        "seed": None,
        "output_dir": Path("out"),
    })
    assert config.drift.magnitude == 0.3
    assert config.drift.kind == "offset_only"
    assert config.days == 5
    assert config.seed == 42
    assert config.output_dir == Path("out")


def test_unknown_override_is_rejected():
    with pytest.raises(ConfigError, match="unknown"):
        apply_overrides(ExperimentConfig(), {"drift.shear": 1.0})
    with pytest.raises(ConfigError, match="unknown"):
        apply_overrides(ExperimentConfig(), {"classifier.reg_c": 1.0})
    with pytest.raises(ConfigError):
        apply_overrides(ExperimentConfig(), {"days": 0})


def test_manifest_paths_resolve_against_its_folder(tmp_path):
    (tmp_path / "data").mkdir()
    path = tmp_path / "data" / "manifest.yaml"
    path.write_text("days: [s1, s2, s3, s4]\nsessions_per_day: 2\n")
    manifest = load_manifest(path)
    assert manifest.root == tmp_path / "data"
    assert manifest.day_groups() == [
        [tmp_path / "data" / "s1", tmp_path / "data" / "s2"],
        [tmp_path / "data" / "s3", tmp_path / "data" / "s4"],
    ]


def test_manifest_relative_root(tmp_path):
    path = tmp_path / "manifest.yaml"
    path.write_text("root: sessions\ndays: [d1]\nmode: raw\nsample_rate_hz: 2000\n")
    manifest = load_manifest(path)
    assert manifest.root == tmp_path / "sessions"
    assert manifest.mode == "raw"
    assert manifest.sample_rate_hz == 2000.0


def test_uneven_sessions_are_rejected():
    manifest = DatasetManifest(days=["a", "b", "c"], sessions_per_day=2)
    with pytest.raises(ValueError):
        manifest.day_groups()


def test_written_manifest_reloads(tmp_path):
    manifest = DatasetManifest(days=["day_01", "day_02"], root=tmp_path / "elsewhere")
    write_manifest(manifest, tmp_path / "manifest.yaml")
    loaded = load_manifest(tmp_path / "manifest.yaml")
    assert loaded.days == manifest.days
    assert loaded.root == tmp_path
    assert loaded.gestures == manifest.gestures
