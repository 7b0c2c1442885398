# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

from dataclasses import dataclass, field
import numpy as np
import numpy.typing as npt

from emg_align.domain.exceptions import DataError, DimensionError, ParameterError

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


def _finite_matrix(values: npt.ArrayLike, name: str) -> FloatArray:
    matrix = np.array(values, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix[None, :]
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise DataError(f"{name} contains NaN or Inf values")
    return matrix


def _int_vector(values: npt.ArrayLike, length: int, name: str) -> IntArray:
    vector = np.asarray(values, dtype=np.int64).reshape(-1)
    if vector.shape[0] != length:
        raise DimensionError(f"{name} has length {vector.shape[0]}, expected {length}")
    return vector


@dataclass(frozen=True)
class SignalMatrix:
    """Raw multichannel recording, channels x samples"""
    data: FloatArray
    sample_rate_hz: float = 4000.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", _finite_matrix(self.data, "signal"))
        if not self.sample_rate_hz > 0:
            raise ParameterError(f"sample rate must be positive, got {self.sample_rate_hz}")

    @property
    def channels(self) -> int:
        return int(self.data.shape[0])

    @property
    def samples(self) -> int:
        return int(self.data.shape[1])


@dataclass(frozen=True)
class RawRecording:
    """A continuous recording with per-sample annotations; label -1 marks rest"""
    signal: SignalMatrix
    labels: IntArray
    repetition: IntArray
    trial: IntArray
    day: str = ""

    def __post_init__(self) -> None:
        n = self.signal.samples
        object.__setattr__(self, "labels", _int_vector(self.labels, n, "labels"))
        object.__setattr__(self, "repetition", _int_vector(self.repetition, n, "repetition"))
        object.__setattr__(self, "trial", _int_vector(self.trial, n, "trial"))


@dataclass(frozen=True)
class FirFilter:
    """Finite impulse response filter"""
    taps: FloatArray
    description: str = ""

    def __post_init__(self) -> None:
        taps = np.asarray(self.taps, dtype=np.float64).reshape(-1)
        if taps.shape[0] < 1:
            raise ParameterError("filter needs at least one tap")
        if not np.all(np.isfinite(taps)):
            raise DataError(f"filter taps are not finite: {taps}")
        object.__setattr__(self, "taps", taps)


@dataclass(frozen=True)
class LabeledWindows:
    """
    Feature stream of one day: channels x windows, plus per-window annotations.

    RMS output is non-negative; drifted and projected streams may leave that range,
    so non-negativity is not enforced here.
    """
    features: FloatArray
    labels: IntArray
    repetition: IntArray
    day: str = ""
    window: IntArray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self) -> None:
        features = _finite_matrix(self.features, "features")
        count = features.shape[1]
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", _int_vector(self.labels, count, "labels"))
        object.__setattr__(self, "repetition", _int_vector(self.repetition, count, "repetition"))
        if np.asarray(self.window).size == 0:
            window = block_window_index(self.labels, self.repetition)
        else:
            window = _int_vector(self.window, count, "window")
        object.__setattr__(self, "window", window)

    @property
    def channels(self) -> int:
        return int(self.features.shape[0])

    @property
    def windows(self) -> int:
        return int(self.features.shape[1])

    @property
    def gestures(self) -> list[int]:
        return sorted(int(g) for g in np.unique(self.labels))

    def select(self, mask: npt.NDArray[np.bool_] | IntArray, day: str | None = None) -> "LabeledWindows":
        """Subset of columns, order preserved"""
        return LabeledWindows(
            features=self.features[:, mask],
            labels=self.labels[mask],
            repetition=self.repetition[mask],
            day=self.day if day is None else day,
            window=self.window[mask],
        )

    def with_features(self, features: FloatArray, day: str | None = None) -> "LabeledWindows":
        """Same annotations, new feature values"""
        return LabeledWindows(
            features=features,
            labels=self.labels,
            repetition=self.repetition,
            day=self.day if day is None else day,
            window=self.window,
        )

    def repetitions_of(self, gesture: int) -> list[int]:
        """Repetition ids of a gesture in order of first appearance"""
        reps = self.repetition[self.labels == gesture]
        _, first = np.unique(reps, return_index=True)
        return [int(reps[i]) for i in sorted(first)]

    def repetition_ordinal(self) -> IntArray:
        """Per window: position of its repetition among the repetitions of its gesture"""
        ordinal = np.zeros(self.windows, dtype=np.int64)
        for gesture in self.gestures:
            for position, rep in enumerate(self.repetitions_of(gesture)):
                ordinal[(self.labels == gesture) & (self.repetition == rep)] = position
        return ordinal


def block_window_index(labels: IntArray, repetition: IntArray) -> IntArray:
    """Running index of each window inside its (gesture, repetition) block"""
    index = np.zeros(labels.shape[0], dtype=np.int64)
    counters: dict[tuple[int, int], int] = {}
    for i, key in enumerate(zip(labels.tolist(), repetition.tolist())):
        index[i] = counters.get(key, 0)
        counters[key] = index[i] + 1
    return index


def concatenate_windows(parts: list[LabeledWindows], day: str = "") -> LabeledWindows:
    """Stack several feature streams column-wise"""
    if not parts:
        raise DimensionError("nothing to concatenate")
    channels = {p.channels for p in parts}
    if len(channels) != 1:
        raise DimensionError(f"channel counts differ: {sorted(channels)}")
    return LabeledWindows(
        features=np.concatenate([p.features for p in parts], axis=1),
        labels=np.concatenate([p.labels for p in parts]),
        repetition=np.concatenate([p.repetition for p in parts]),
        day=day,
        window=np.concatenate([p.window for p in parts]),
    )


def merge_sessions(sessions: list[LabeledWindows], day: str = "") -> LabeledWindows:
    """
    Join the sessions of one day (e.g. morning and afternoon).
    Repetition ids of each later session are shifted past the ones already seen.
    """
    shifted: list[LabeledWindows] = []
    offset = 0
    for session in sessions:
        repetition = session.repetition - session.repetition.min() + offset
        shifted.append(LabeledWindows(
            features=session.features,
            labels=session.labels,
            repetition=repetition,
            day=day,
            window=session.window,
        ))
        offset = int(repetition.max()) + 1
    return concatenate_windows(shifted, day=day)
