# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

from dataclasses import dataclass
import numpy as np
import numpy.typing as npt

from emg_align.domain.exceptions import DataError, DimensionError, ParameterError

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class SvmModel:
    """One-vs-rest linear SVM with built-in feature standardization"""
    weights: FloatArray          # G x n
    biases: FloatArray           # G
    reg_c: float
    classes: tuple[int, ...]
    feature_means: FloatArray    # n
    feature_scales: FloatArray   # n
    seed: int = 42
    epochs: int = 200

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=np.float64)
        biases = np.asarray(self.biases, dtype=np.float64).reshape(-1)
        means = np.asarray(self.feature_means, dtype=np.float64).reshape(-1)
        scales = np.asarray(self.feature_scales, dtype=np.float64).reshape(-1)
        classes = tuple(int(c) for c in self.classes)
        if weights.ndim != 2:
            raise DimensionError(f"weights must be G x n, got shape {weights.shape}")
        g, n = weights.shape
        if biases.shape[0] != g or len(classes) != g:
            raise DimensionError(f"{g} weight rows but {biases.shape[0]} biases and {len(classes)} classes")
        if means.shape[0] != n or scales.shape[0] != n:
            raise DimensionError("standardization vectors do not match the weight width")
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(biases))):
            raise DataError("model weights are not finite")
        if not self.reg_c > 0:
            raise ParameterError(f"reg_c must be positive, got {self.reg_c}")
        if not np.all(scales > 0):
            raise ParameterError("feature scales must be positive")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "biases", biases)
        object.__setattr__(self, "feature_means", means)
        object.__setattr__(self, "feature_scales", scales)
        object.__setattr__(self, "classes", classes)

    @property
    def channels(self) -> int:
        return int(self.weights.shape[1])
