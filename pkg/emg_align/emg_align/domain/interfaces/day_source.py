# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

from abc import ABC, abstractmethod

from emg_align.domain.entities.signal_data import LabeledWindows


class IDaySource(ABC):
    """Interface for obtaining the feature stream of each recording day"""

    @property
    @abstractmethod
    def day_count(self) -> int:
        """Number of available days, reference day included"""
        pass

    @abstractmethod
    def load(self, day_index: int) -> LabeledWindows:
        """Feature stream of a day; day 1 is the reference day"""
        pass

    def reference(self) -> LabeledWindows:
        """Reference day used to train the classifier"""
        return self.load(1)
