# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

from pathlib import Path
from typing import Literal, Optional
from pydantic import BaseModel, Field, field_validator, model_validator

from emg_align.domain.constants import protocol


class GeometryConfig(BaseModel):
    n_channels: int = Field(default=protocol.N_CHANNELS, ge=1)
    n_gestures: int = Field(default=protocol.N_GESTURES, ge=2)
    within_std: float = Field(default=0.15, ge=0.0)
    reps_per_gesture: int = Field(default=protocol.REPS_PER_GESTURE, ge=1)
    windows_per_rep: int = Field(default=protocol.WINDOWS_PER_REP, ge=1)
    prototype_low: float = 1.0
    prototype_high: float = 5.0

    @model_validator(mode="after")
    def _check_range(self) -> "GeometryConfig":
        if not self.prototype_low < self.prototype_high:
            raise ValueError("prototype_low must be below prototype_high")
        return self


class DriftConfig(BaseModel):
    kind: Literal["rotation", "general_linear", "gain", "offset_only"] = "rotation"
    magnitude: float = Field(default=1.0, ge=0.0)
    noise_std: Optional[float] = Field(default=None, ge=0.0)
    noise_fraction: float = Field(default=0.25, ge=0.0)

    @field_validator("kind", mode="before")
    @classmethod
    def _normalize_kind(cls, value: str) -> str:
        return value.replace("-", "_") if isinstance(value, str) else value


class SvmConfig(BaseModel):
    reg_c: float = Field(default=1.0, gt=0.0)
    epochs: int = Field(default=200, ge=1)
    batch_size: int = Field(default=32, ge=1)
    seed: int = 42


class ExperimentConfig(BaseModel):
    """Everything needed to reproduce one experiment run"""
    days: int = Field(default=10, ge=2)
    seed: int = 42
    geometry: GeometryConfig = GeometryConfig()
    drift: DriftConfig = DriftConfig()
    svm: SvmConfig = SvmConfig()
    calibration_reps: int = Field(default=2, ge=1)
    train_fraction: float = Field(default=0.75, gt=0.0, lt=1.0)
    ridge: float = Field(default=1e-6, ge=0.0)
    sessions_per_day: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)
    embedding_gestures: list[int] = Field(default_factory=lambda: [0, 1])
    output_dir: Path = Path("results")

    @model_validator(mode="after")
    def _check_calibration(self) -> "ExperimentConfig":
        reps = self.geometry.reps_per_gesture
        if reps < 2:
            raise ValueError(f"reps_per_gesture ({reps}) must be at least 2 to leave a held-out repetition")
        if self.calibration_reps >= reps:
            raise ValueError(
                f"calibration_reps ({self.calibration_reps}) must leave at least one of "
                f"reps_per_gesture ({reps}) for evaluation"
            )
        return self

    @property
    def noise_std(self) -> float:
        """Explicit noise, else a fraction of the within-cluster spread"""
        if self.drift.noise_std is not None:
            return self.drift.noise_std
        return self.drift.noise_fraction * self.geometry.within_std


class FilterSettings(BaseModel):
    notch_hz: float = protocol.NOTCH_HZ
    notch_taps: int = protocol.NOTCH_TAPS
    band_low_hz: float = protocol.BAND_LOW_HZ
    band_high_hz: float = protocol.BAND_HIGH_HZ
    band_taps: int = protocol.BAND_TAPS
    window_ms: float = protocol.WINDOW_MS
    slide_ms: float = protocol.SLIDE_MS
    apply_filters: bool = True


class DatasetManifest(BaseModel):
    """Dataset root description; session directories are relative to the manifest"""
    days: list[str] = Field(min_length=1)
    mode: Literal["features", "raw"] = "features"
    sample_rate_hz: float = Field(default=protocol.SAMPLE_RATE_HZ, gt=0.0)
    sessions_per_day: int = Field(default=1, ge=1)
    gestures: dict[int, str] = Field(default_factory=lambda: dict(protocol.GESTURE_NAMES))
    filters: FilterSettings = FilterSettings()
    root: Path = Path(".")

    def day_groups(self) -> list[list[Path]]:
        """Session directories grouped into days"""
        if len(self.days) % self.sessions_per_day != 0:
            raise ValueError(
                f"{len(self.days)} sessions do not split into days of {self.sessions_per_day}"
            )
        paths = [self.root / d for d in self.days]
        size = self.sessions_per_day
        return [paths[i:i + size] for i in range(0, len(paths), size)]
