# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

import logging
from pathlib import Path

from emg_align.domain.entities.experiment_config import DatasetManifest
from emg_align.domain.entities.signal_data import LabeledWindows, merge_sessions
from emg_align.domain.exceptions import ParameterError
from emg_align.domain.interfaces.day_source import IDaySource
from emg_align.infrastructure.storage.day_csv import load_day

logger = logging.getLogger(__name__)


class DirectoryDaySource(IDaySource):
    """Days read from the session directories listed in a manifest"""

    def __init__(self, manifest: DatasetManifest):
        self.manifest = manifest
        self._groups: list[list[Path]] = manifest.day_groups()
        self._cache: dict[int, LabeledWindows] = {}

    @property
    def day_count(self) -> int:
        return len(self._groups)

    def load(self, day_index: int) -> LabeledWindows:
        if not 1 <= day_index <= self.day_count:
            raise ParameterError(f"day {day_index} outside 1..{self.day_count}")
        if day_index not in self._cache:
            sessions = [load_day(path, self.manifest) for path in self._groups[day_index - 1]]
            if len(sessions) == 1:
                day = sessions[0].with_features(sessions[0].features, day=str(day_index))
            else:
                logger.info(f"Merging {len(sessions)} sessions into day {day_index}")
                day = merge_sessions(sessions, day=str(day_index))
            self._cache[day_index] = day
        return self._cache[day_index]
