# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class CorrelationMetrics:
    """Across-day correlation before and after alignment"""
    aligned: float
    unaligned: float
    gain: float


@dataclass(frozen=True)
class DayReport:
    """Per-day outcome of an experiment"""
    day_id: str
    mean_canonical_correlation_aligned: float
    mean_channelwise_correlation_unaligned: float
    correlation_gain: float
    within_day_upper_bound: float
    normalized_aligned_correlation: float
    acc_unaligned: float
    acc_aligned: float
    acc_pooled: float
    acc_reference: float
    relative_accuracy: float

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]
