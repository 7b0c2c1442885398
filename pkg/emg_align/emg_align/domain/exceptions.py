# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Error hierarchy for the alignment toolkit.
Every error raised on purpose by the package derives from EmgAlignError.
"""

from typing import Sequence


class EmgAlignError(Exception):
    """Root of all package errors"""


class DimensionError(EmgAlignError, ValueError):
    """Raised when matrix or vector shapes do not agree"""


class PairingError(DimensionError):
    """Raised when calibration matrices cannot be paired column by column"""


class ParameterError(EmgAlignError, ValueError):
    """Raised for out-of-range parameters (frequencies, window lengths, magnitudes)"""


class SingularMatrixError(EmgAlignError, ArithmeticError):
    """Raised when a covariance is not positive definite even after regularization"""


class ConvergenceError(EmgAlignError, ArithmeticError):
    """Raised when an iterative numerical routine fails to converge"""


class DataError(EmgAlignError, ValueError):
    """Raised for non-finite or otherwise unusable data"""


class TrainingError(EmgAlignError, ValueError):
    """Raised when a classifier cannot be trained on the given data"""


class ConfigError(EmgAlignError, ValueError):
    """Raised for invalid experiment configuration or manifests"""


class CalibrationCoverageError(EmgAlignError, ValueError):
    """Raised when a day lacks the repetitions needed for calibration"""

    def __init__(self, missing_gestures: Sequence[int], reps_per_gesture: int):
        self.missing_gestures = sorted(int(g) for g in missing_gestures)
        self.reps_per_gesture = reps_per_gesture
        super().__init__(
            f"gestures {self.missing_gestures} have fewer than {reps_per_gesture} "
            f"repetitions in one of the calibration days"
        )


class IngestionError(DataError):
    """Raised when a day file cannot be read; row is 1-based over data rows"""

    def __init__(self, message: str, path: str | None = None, row: int | None = None):
        self.path = path
        self.row = row
        location = ""
        if path is not None:
            location += f"{path}: "
        if row is not None:
            location += f"row {row}: "
        super().__init__(f"{location}{message}")


class ExperimentError(EmgAlignError, RuntimeError):
    """Wraps a stage failure with the day it happened on"""

    def __init__(self, day_id: str, stage: str, cause: Exception):
        self.day_id = day_id
        self.stage = stage
        super().__init__(f"day {day_id}: {stage} failed: {type(cause).__name__}: {cause}")
