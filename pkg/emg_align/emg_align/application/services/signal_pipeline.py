# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Signal pipeline: notch + band-pass preprocessing and RMS feature extraction.
"""

import logging
import numpy as np
import numpy.typing as npt
from numpy.lib.stride_tricks import sliding_window_view

from emg_align.domain.constants import protocol
from emg_align.domain.entities.experiment_config import FilterSettings
from emg_align.domain.entities.signal_data import (
    LabeledWindows, RawRecording, SignalMatrix, concatenate_windows
)
from emg_align.domain.exceptions import DimensionError, ParameterError
from emg_align.domain.math.fir_design import apply_filter, design_bandpass, design_notch

logger = logging.getLogger(__name__)


def window_samples(duration_ms: float, sample_rate_hz: float) -> int:
    return int(round(duration_ms * sample_rate_hz / 1000.0))


def window_count(total: int, window: int, slide: int) -> int:
    """floor((T - W) / S) + 1, zero when the signal is shorter than a window"""
    if window > total:
        return 0
    return (total - window) // slide + 1


def majority_label(labels: npt.NDArray[np.int64]) -> int:
    """Most frequent label; ties go to the label seen first"""
    values, first_seen, counts = np.unique(labels, return_index=True, return_counts=True)
    tied = counts == counts.max()
    return int(values[tied][np.argmin(first_seen[tied])])


def rms_features(
    s: SignalMatrix,
    labels: npt.ArrayLike,
    window_ms: float = protocol.WINDOW_MS,
    slide_ms: float = protocol.SLIDE_MS,
    repetition: int = 0,
    day: str = "",
) -> LabeledWindows:
    """Sliding-window RMS of one contraction trial"""
    if window_ms <= 0 or slide_ms <= 0:
        raise ParameterError(f"window ({window_ms} ms) and slide ({slide_ms} ms) must be positive")
    sample_labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if sample_labels.shape[0] != s.samples:
        raise DimensionError(f"{sample_labels.shape[0]} labels for {s.samples} samples")

    window = window_samples(window_ms, s.sample_rate_hz)
    slide = window_samples(slide_ms, s.sample_rate_hz)
    if window < 1 or slide < 1:
        raise ParameterError(f"window/slide shorter than one sample at {s.sample_rate_hz} Hz")
    count = window_count(s.samples, window, slide)
    if count == 0:
        raise ParameterError(f"signal of {s.samples} samples is shorter than one window ({window})")

    squares = sliding_window_view(s.data * s.data, window, axis=1)[:, ::slide, :]
    features = np.sqrt(np.mean(squares, axis=2))

    label_windows = sliding_window_view(sample_labels, window)[::slide]
    window_labels = np.array([majority_label(w) for w in label_windows], dtype=np.int64)
    return LabeledWindows(
        features=features,
        labels=window_labels,
        repetition=np.full(count, repetition, dtype=np.int64),
        day=day,
        window=np.arange(count, dtype=np.int64),
    )


def preprocess(s: SignalMatrix, settings: FilterSettings) -> SignalMatrix:
    """Notch then band-pass, both causal"""
    if not settings.apply_filters:
        return s
    notch = design_notch(settings.notch_hz, s.sample_rate_hz, settings.notch_taps)
    band = design_bandpass(settings.band_low_hz, settings.band_high_hz, s.sample_rate_hz, settings.band_taps)
    logger.debug(f"Filtering with [{notch.description}] and [{band.description}]")
    return apply_filter(band, apply_filter(notch, s))


def extract_trial_features(recording: RawRecording, settings: FilterSettings) -> LabeledWindows:
    """
    Filter a continuous recording, cut it into contraction trials and window each
    trial separately so no window spans two gestures. Rest samples are dropped.
    """
    filtered = preprocess(recording.signal, settings)
    active = recording.labels != protocol.REST_LABEL
    trial_ids = recording.trial[active]
    _, first = np.unique(trial_ids, return_index=True)
    ordered_trials = [int(trial_ids[i]) for i in sorted(first)]

    parts: list[LabeledWindows] = []
    for trial in ordered_trials:
        mask = active & (recording.trial == trial)
        segment = SignalMatrix(data=filtered.data[:, mask], sample_rate_hz=filtered.sample_rate_hz)
        repetitions = np.unique(recording.repetition[mask])
        if repetitions.shape[0] != 1:
            raise ParameterError(f"trial {trial} spans repetitions {repetitions.tolist()}")
        try:
            parts.append(rms_features(
                segment,
                recording.labels[mask],
                settings.window_ms,
                settings.slide_ms,
                repetition=int(repetitions[0]),
                day=recording.day,
            ))
        except ParameterError:
            logger.warning(f"Trial {trial} is shorter than one window and is skipped")

    logger.info(f"Extracted {sum(p.windows for p in parts)} windows from {len(parts)} trials")
    return concatenate_windows(parts, day=recording.day)
