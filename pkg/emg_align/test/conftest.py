# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

import numpy as np
import pytest

from emg_align.application.services.drift_simulator import gen_reference, make_geometry
from emg_align.domain.entities.experiment_config import ExperimentConfig, GeometryConfig, SvmConfig
from emg_align.domain.entities.signal_data import LabeledWindows


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def reference_day() -> LabeledWindows:
    """Full-size simulated reference day: 8 gestures x 8 reps x 28 windows"""
    return gen_reference(make_geometry(seed=0), seed=0)


@pytest.fixture
def small_day() -> LabeledWindows:
    """8 gestures x 4 reps x 10 windows"""
    return gen_reference(make_geometry(reps_per_gesture=4, windows_per_rep=10, seed=3), seed=3)


@pytest.fixture
def small_config(tmp_path) -> ExperimentConfig:
    return ExperimentConfig(
        days=3,
        geometry=GeometryConfig(reps_per_gesture=4, windows_per_rep=10),
        svm=SvmConfig(epochs=50),
        output_dir=tmp_path / "results",
    )
