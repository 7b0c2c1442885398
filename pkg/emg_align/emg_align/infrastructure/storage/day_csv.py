# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Day directory layout shared by simulated and recorded data.

    <day>/features.csv   window, ch0..ch{n-1}, label, repetition
    <day>/raw.csv        t, ch0..ch{n-1}, label, repetition, trial   (label -1 = rest)
    <day>/day.yaml       day id, mode, seed and shape metadata

Row numbers in ingestion errors count data rows from 1, header excluded.
"""

import logging
import re
from pathlib import Path
from typing import Any, Optional
import numpy as np
import pandas as pd
import yaml

from emg_align.application.services.signal_pipeline import extract_trial_features
from emg_align.domain.constants import protocol
from emg_align.domain.entities.experiment_config import DatasetManifest, FilterSettings
from emg_align.domain.entities.signal_data import LabeledWindows, RawRecording, SignalMatrix
from emg_align.domain.exceptions import EmgAlignError, IngestionError

logger = logging.getLogger(__name__)

FEATURES_FILE = "features.csv"
RAW_FILE = "raw.csv"
META_FILE = "day.yaml"
FLOAT_FORMAT = "%.17g"

_CHANNEL = re.compile(r"^ch(\d+)$")


def _channel_columns(frame: pd.DataFrame, path: Path) -> list[str]:
    found = sorted((int(m.group(1)), c) for c in frame.columns if (m := _CHANNEL.match(str(c))))
    if not found:
        raise IngestionError("no channel columns (ch0, ch1, ...)", path=str(path))
    indices = [i for i, _ in found]
    if indices != list(range(len(indices))):
        raise IngestionError(f"channel columns are not contiguous from ch0: {[c for _, c in found]}", path=str(path))
    return [c for _, c in found]


def _require_columns(frame: pd.DataFrame, required: list[str], path: Path) -> None:
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise IngestionError(f"missing columns {missing}", path=str(path))


def _check_finite(frame: pd.DataFrame, columns: list[str], path: Path) -> None:
    values = frame[columns].apply(pd.to_numeric, errors="coerce")
    bad = ~np.isfinite(values.to_numpy(dtype=np.float64))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise IngestionError(f"non-numeric or non-finite value in column {columns[col]}", path=str(path), row=int(row) + 1)


def _integer_column(frame: pd.DataFrame, column: str, path: Path) -> np.ndarray:
    values = frame[column].to_numpy(dtype=np.float64)
    fractional = values != np.round(values)
    if fractional.any():
        row = int(np.argmax(fractional))
        raise IngestionError(f"column {column} must hold integers", path=str(path), row=row + 1)
    return values.astype(np.int64)


def _check_label_set(labels: np.ndarray, path: Path) -> None:
    present = sorted(int(g) for g in np.unique(labels))
    if present != list(range(len(present))):
        raise IngestionError(f"labels must form a contiguous set 0..G-1, found {present}", path=str(path))


def _read_frame(path: Path) -> pd.DataFrame:
    if not path.exists():
        raise IngestionError("file not found", path=str(path))
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise IngestionError(f"unreadable CSV: {e}", path=str(path)) from e
    if frame.empty:
        raise IngestionError("no data rows", path=str(path))
    return frame


def read_feature_csv(path: Path, day: str = "") -> LabeledWindows:
    frame = _read_frame(path)
    _require_columns(frame, ["window", "label", "repetition"], path)
    channels = _channel_columns(frame, path)
    _check_finite(frame, ["window", *channels, "label", "repetition"], path)
    labels = _integer_column(frame, "label", path)
    _check_label_set(labels, path)
    return LabeledWindows(
        features=frame[channels].to_numpy(dtype=np.float64).T,
        labels=labels,
        repetition=_integer_column(frame, "repetition", path),
        day=day,
        window=_integer_column(frame, "window", path),
    )


def read_raw_csv(path: Path, sample_rate_hz: float, day: str = "") -> RawRecording:
    frame = _read_frame(path)
    _require_columns(frame, ["t", "label", "repetition", "trial"], path)
    channels = _channel_columns(frame, path)
    _check_finite(frame, ["t", *channels, "label", "repetition", "trial"], path)
    return RawRecording(
        signal=SignalMatrix(frame[channels].to_numpy(dtype=np.float64).T, sample_rate_hz),
        labels=_integer_column(frame, "label", path),
        repetition=_integer_column(frame, "repetition", path),
        trial=_integer_column(frame, "trial", path),
        day=day,
    )


def read_day_meta(dir_path: Path) -> dict[str, Any]:
    meta_path = Path(dir_path) / META_FILE
    if not meta_path.exists():
        return {}
    with open(meta_path, "r") as file_handle:
        meta = yaml.safe_load(file_handle) or {}
    if not isinstance(meta, dict):
        raise IngestionError("metadata is not a mapping", path=str(meta_path))
    return meta


def load_day(dir_path: Path, manifest: Optional[DatasetManifest] = None) -> LabeledWindows:
    """
    Validated feature stream of one day directory.
    Raw recordings are filtered and windowed with the manifest's settings.
    """
    dir_path = Path(dir_path)
    meta = read_day_meta(dir_path)
    day_id = str(meta.get("day_id") or dir_path.name)
    if manifest is not None:
        mode = manifest.mode
    else:
        mode = meta.get("mode", "features" if (dir_path / FEATURES_FILE).exists() else "raw")

    if mode == "features":
        day = read_feature_csv(dir_path / FEATURES_FILE, day=day_id)
    else:
        sample_rate = manifest.sample_rate_hz if manifest is not None else float(meta.get("sample_rate_hz", protocol.SAMPLE_RATE_HZ))
        settings = manifest.filters if manifest is not None else FilterSettings()
        raw_path = dir_path / RAW_FILE
        recording = read_raw_csv(raw_path, sample_rate, day=day_id)
        try:
            day = extract_trial_features(recording, settings)
        except EmgAlignError as e:
            raise IngestionError(f"feature extraction failed: {e}", path=str(raw_path)) from e
        _check_label_set(day.labels, raw_path)
    logger.info(f"Loaded day {day_id} from {dir_path}: {day.channels} channels x {day.windows} windows")
    return day


def write_day(day: LabeledWindows, dir_path: Path, seed: Optional[int] = None) -> Path:
    """features.csv plus day.yaml; returns the directory"""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(day.features.T, columns=[f"ch{i}" for i in range(day.channels)])
    frame.insert(0, "window", day.window)
    frame["label"] = day.labels
    frame["repetition"] = day.repetition
    frame.to_csv(dir_path / FEATURES_FILE, index=False, float_format=FLOAT_FORMAT)
    _write_meta(dir_path, {
        "day_id": day.day,
        "mode": "features",
        "seed": seed,
        "channels": day.channels,
        "windows": day.windows,
    })
    return dir_path


def write_raw_day(recording: RawRecording, dir_path: Path) -> Path:
    """raw.csv plus day.yaml"""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    signal = recording.signal
    frame = pd.DataFrame(signal.data.T, columns=[f"ch{i}" for i in range(signal.channels)])
    frame.insert(0, "t", np.arange(signal.samples) / signal.sample_rate_hz)
    frame["label"] = recording.labels
    frame["repetition"] = recording.repetition
    frame["trial"] = recording.trial
    frame.to_csv(dir_path / RAW_FILE, index=False, float_format=FLOAT_FORMAT)
    _write_meta(dir_path, {
        "day_id": recording.day,
        "mode": "raw",
        "sample_rate_hz": signal.sample_rate_hz,
        "channels": signal.channels,
        "samples": signal.samples,
    })
    return dir_path


def _write_meta(dir_path: Path, meta: dict[str, Any]) -> None:
    with open(dir_path / META_FILE, "w") as file_handle:
        yaml.safe_dump({k: v for k, v in meta.items() if v is not None}, file_handle, sort_keys=False)
