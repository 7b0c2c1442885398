# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Low-dimensional views of aligned and unaligned days.
A 2-D principal component projection fitted on the reference day.
"""

from dataclasses import dataclass
import numpy as np
import numpy.typing as npt

from emg_align.domain.entities.signal_data import LabeledWindows
from emg_align.domain.exceptions import DimensionError
from emg_align.domain.math import linalg

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class Embedding2D:
    """Points of several sources in one shared plane"""
    source: list[str]
    x: FloatArray
    y: FloatArray
    label: npt.NDArray[np.int64]


def principal_plane(reference: LabeledWindows) -> tuple[FloatArray, FloatArray]:
    """Reference mean and the top two principal axes (n x 2)"""
    if reference.channels < 2:
        raise DimensionError("a 2-D projection needs at least two channels")
    mean = reference.features.mean(axis=1)
    decomposition = linalg.svd(reference.features - mean[:, None])
    return mean, decomposition.u[:, :2]


def embed_2d(
    reference: LabeledWindows,
    others: dict[str, LabeledWindows],
    gestures: list[int] | None = None,
) -> Embedding2D:
    """Project the reference and each named day onto the reference principal plane"""
    mean, axes = principal_plane(reference)
    sources: list[str] = []
    xs: list[FloatArray] = []
    ys: list[FloatArray] = []
    labels: list[npt.NDArray[np.int64]] = []
    for name, day in [("reference", reference), *others.items()]:
        if day.channels != reference.channels:
            raise DimensionError(f"{name} has {day.channels} channels, reference has {reference.channels}")
        keep = np.ones(day.windows, dtype=bool) if not gestures else np.isin(day.labels, gestures)
        coords = axes.T @ (day.features[:, keep] - mean[:, None])
        sources.extend([name] * int(keep.sum()))
        xs.append(coords[0])
        ys.append(coords[1])
        labels.append(day.labels[keep])
    return Embedding2D(
        source=sources,
        x=np.concatenate(xs),
        y=np.concatenate(ys),
        label=np.concatenate(labels),
    )
