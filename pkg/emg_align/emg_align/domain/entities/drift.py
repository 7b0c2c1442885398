# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

from dataclasses import dataclass
from enum import Enum
import numpy as np
import numpy.typing as npt

from emg_align.domain.exceptions import DimensionError, ParameterError

FloatArray = npt.NDArray[np.float64]


class DriftKind(str, Enum):
    ROTATION = "rotation"
    GENERAL_LINEAR = "general_linear"
    GAIN = "gain"
    OFFSET_ONLY = "offset_only"

    @classmethod
    def parse(cls, value: "str | DriftKind") -> "DriftKind":
        if isinstance(value, DriftKind):
            return value
        try:
            return cls(value.replace("-", "_"))
        except ValueError as e:
            raise ParameterError(f"unknown drift kind {value!r}") from e


@dataclass(frozen=True)
class GestureGeometry:
    """Cluster layout of the simulated reference day"""
    prototypes: FloatArray     # n_gestures x n_channels
    within_std: float
    reps_per_gesture: int = 8
    windows_per_rep: int = 28

    def __post_init__(self) -> None:
        prototypes = np.asarray(self.prototypes, dtype=np.float64)
        if prototypes.ndim != 2 or min(prototypes.shape) < 1:
            raise DimensionError(f"prototypes must be a non-empty matrix, got {prototypes.shape}")
        if self.reps_per_gesture < 1 or self.windows_per_rep < 1:
            raise ParameterError("repetition and window counts must be at least 1")
        if self.within_std < 0:
            raise ParameterError(f"within_std must be non-negative, got {self.within_std}")
        gaps = pairwise_distances(prototypes)
        if prototypes.shape[0] > 1 and gaps.min() < 6 * self.within_std:
            raise ParameterError(
                f"prototypes closer than 6 within_std: min distance {gaps.min():.4f}, "
                f"within_std {self.within_std}"
            )
        object.__setattr__(self, "prototypes", prototypes)

    @property
    def n_gestures(self) -> int:
        return int(self.prototypes.shape[0])

    @property
    def n_channels(self) -> int:
        return int(self.prototypes.shape[1])


def pairwise_distances(points: FloatArray) -> FloatArray:
    """Distances between distinct rows"""
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    upper = np.triu_indices(points.shape[0], k=1)
    return dist[upper] if upper[0].size else np.array([np.inf])


@dataclass(frozen=True)
class DriftSpec:
    """Ground-truth day transform: x -> mixing @ x + offset + noise"""
    mixing: FloatArray
    offset: FloatArray
    noise_std: float = 0.0
    day_id: str = ""
    kind: DriftKind = DriftKind.GENERAL_LINEAR
    magnitude: float = 0.0

    def __post_init__(self) -> None:
        mixing = np.asarray(self.mixing, dtype=np.float64)
        offset = np.asarray(self.offset, dtype=np.float64).reshape(-1)
        if mixing.ndim != 2 or mixing.shape[0] != mixing.shape[1]:
            raise DimensionError(f"mixing must be square, got {mixing.shape}")
        if offset.shape[0] != mixing.shape[0]:
            raise DimensionError(f"offset length {offset.shape[0]} does not match mixing {mixing.shape}")
        if self.noise_std < 0:
            raise ParameterError(f"noise_std must be non-negative, got {self.noise_std}")
        if abs(np.linalg.det(mixing)) <= 1e-6:
            raise ParameterError("mixing matrix is not invertible")
        object.__setattr__(self, "mixing", mixing)
        object.__setattr__(self, "offset", offset)

    @property
    def n_channels(self) -> int:
        return int(self.mixing.shape[0])
