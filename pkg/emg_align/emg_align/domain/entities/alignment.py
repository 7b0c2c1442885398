# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

from dataclasses import dataclass
import numpy as np
import numpy.typing as npt

from emg_align.domain.entities.signal_data import LabeledWindows
from emg_align.domain.exceptions import DimensionError, DataError

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


@dataclass(frozen=True)
class CcaMapping:
    """Fitted alignment between a reference day and a new day"""
    a: FloatArray              # n x m, canonical directions of the reference day
    b: FloatArray              # n x m, canonical directions of the new day
    correlations: FloatArray   # length m, descending
    mean_ref: FloatArray
    mean_new: FloatArray
    ridge: float
    centered: bool = True

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        if a.ndim != 2 or a.shape != b.shape:
            raise DimensionError(f"A and B must share a 2-D shape, got {a.shape} and {b.shape}")
        n, m = a.shape
        if m > n:
            raise DimensionError(f"more canonical components ({m}) than channels ({n})")
        correlations = np.asarray(self.correlations, dtype=np.float64).reshape(-1)
        mean_ref = np.asarray(self.mean_ref, dtype=np.float64).reshape(-1)
        mean_new = np.asarray(self.mean_new, dtype=np.float64).reshape(-1)
        if correlations.shape[0] != m or mean_ref.shape[0] != n or mean_new.shape[0] != n:
            raise DimensionError("correlation or mean vector length does not match A")
        for name, value in (("A", a), ("B", b), ("correlations", correlations),
                            ("mean_ref", mean_ref), ("mean_new", mean_new)):
            if not np.all(np.isfinite(value)):
                raise DataError(f"mapping {name} is not finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "correlations", correlations)
        object.__setattr__(self, "mean_ref", mean_ref)
        object.__setattr__(self, "mean_new", mean_new)

    @property
    def channels(self) -> int:
        return int(self.a.shape[0])

    @property
    def components(self) -> int:
        return int(self.a.shape[1])


@dataclass(frozen=True)
class CalibrationPair:
    """Column-paired calibration windows of the reference day and a new day"""
    reference: LabeledWindows
    new: LabeledWindows
    reps_per_gesture: int
    reference_columns: IntArray
    new_columns: IntArray
