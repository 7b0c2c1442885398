# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Synthetic multi-day feature generator with known ground-truth drift.

The reference day is a set of Gaussian gesture clusters in RMS feature space.
Every later day is the reference passed through an invertible linear map plus
offset and fresh noise, so alignment results can be checked against the exact
inverse transform.
"""

import logging
import numpy as np
import numpy.typing as npt
from scipy import linalg as sla

from emg_align.domain.constants import protocol
from emg_align.domain.entities.drift import DriftKind, DriftSpec, GestureGeometry, pairwise_distances
from emg_align.domain.entities.experiment_config import ExperimentConfig
from emg_align.domain.entities.signal_data import LabeledWindows
from emg_align.domain.exceptions import DimensionError, ParameterError
from emg_align.domain.interfaces.day_source import IDaySource

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

MAX_RESAMPLE_ATTEMPTS = 100
MIN_GENERAL_DET = 1e-3


def make_geometry(
    n_channels: int = protocol.N_CHANNELS,
    n_gestures: int = protocol.N_GESTURES,
    within_std: float = 0.15,
    reps_per_gesture: int = protocol.REPS_PER_GESTURE,
    windows_per_rep: int = protocol.WINDOWS_PER_REP,
    seed: int = 0,
    low: float = 1.0,
    high: float = 5.0,
) -> GestureGeometry:
    """Prototypes drawn uniformly in [low, high] until every pair is 6 within_std apart"""
    if n_channels < 1 or n_gestures < 1:
        raise ParameterError("channel and gesture counts must be at least 1")
    rng = np.random.default_rng(seed)
    for attempt in range(MAX_RESAMPLE_ATTEMPTS):
        prototypes = rng.uniform(low, high, size=(n_gestures, n_channels))
        if n_gestures == 1 or pairwise_distances(prototypes).min() >= 6 * within_std:
            if attempt:
                logger.debug(f"Gesture prototypes accepted after {attempt + 1} draws")
            return GestureGeometry(
                prototypes=prototypes,
                within_std=within_std,
                reps_per_gesture=reps_per_gesture,
                windows_per_rep=windows_per_rep,
            )
    raise ParameterError(
        f"could not place {n_gestures} prototypes 6 x {within_std} apart in "
        f"[{low}, {high}]^{n_channels} after {MAX_RESAMPLE_ATTEMPTS} draws"
    )


def gen_reference(geom: GestureGeometry, seed: int, day: str = "1") -> LabeledWindows:
    """
    Windows ordered by (gesture, repetition, window). Samples are clipped at 0
    since RMS values cannot be negative.
    """
    rng = np.random.default_rng(seed)
    g, r, k = geom.n_gestures, geom.reps_per_gesture, geom.windows_per_rep
    labels = np.repeat(np.arange(g, dtype=np.int64), r * k)
    repetition = np.tile(np.repeat(np.arange(r, dtype=np.int64), k), g)
    window = np.tile(np.arange(k, dtype=np.int64), g * r)

    centers = geom.prototypes[labels].T
    noise = rng.normal(0.0, 1.0, size=centers.shape) * geom.within_std
    features = np.maximum(centers + noise, 0.0)
    return LabeledWindows(features=features, labels=labels, repetition=repetition, day=day, window=window)


def _random_rotation(rng: np.random.Generator, n: int) -> FloatArray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    q = q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def _blend_rotation(q: FloatArray, magnitude: float) -> FloatArray:
    """Geodesic from the identity (0) to q (1) through the matrix logarithm"""
    if magnitude == 0:
        return np.eye(q.shape[0])
    log_q = np.real(sla.logm(q))
    skew = 0.5 * (log_q - log_q.T)
    return np.real(sla.expm(magnitude * skew))


def make_drift(
    kind: DriftKind | str,
    magnitude: float,
    seed: int,
    n_channels: int = protocol.N_CHANNELS,
    noise_std: float = 0.0,
    day_id: str = "",
) -> DriftSpec:
    """Random day transform of the given family"""
    drift_kind = DriftKind.parse(kind)
    if magnitude < 0:
        raise ParameterError(f"drift magnitude must be non-negative, got {magnitude}")
    rng = np.random.default_rng(seed)
    n = n_channels
    offset = np.zeros(n)

    if drift_kind is DriftKind.ROTATION:
        mixing = _blend_rotation(_random_rotation(rng, n), magnitude)
    elif drift_kind is DriftKind.GENERAL_LINEAR:
        mixing = _resample(lambda: np.eye(n) + magnitude * rng.normal(size=(n, n)) / np.sqrt(n), drift_kind)
    elif drift_kind is DriftKind.GAIN:
        mixing = _resample(lambda: np.diag(rng.uniform(1.0 - magnitude, 1.0 + magnitude, size=n)), drift_kind)
    else:
        mixing = np.eye(n)
        if magnitude > 0:
            direction = rng.normal(size=n)
            offset = magnitude * direction / np.linalg.norm(direction)

    return DriftSpec(
        mixing=mixing,
        offset=offset,
        noise_std=noise_std,
        day_id=day_id,
        kind=drift_kind,
        magnitude=magnitude,
    )


def _resample(draw, kind: DriftKind) -> FloatArray:
    for attempt in range(MAX_RESAMPLE_ATTEMPTS):
        mixing = draw()
        if abs(np.linalg.det(mixing)) > MIN_GENERAL_DET:
            return mixing
        logger.warning(f"Resampling {kind.value} drift, draw {attempt + 1} was near-singular")
    raise ParameterError(f"no invertible {kind.value} mixing found in {MAX_RESAMPLE_ATTEMPTS} draws")


def apply_drift(ref: LabeledWindows, spec: DriftSpec, seed: int) -> LabeledWindows:
    """mixing @ x + offset + N(0, noise_std^2 I) per column; negatives are kept"""
    if spec.n_channels != ref.channels:
        raise DimensionError(f"drift is {spec.n_channels}-channel, day has {ref.channels} channels")
    rng = np.random.default_rng(seed)
    drifted = spec.mixing @ ref.features + spec.offset[:, None]
    if spec.noise_std > 0:
        drifted = drifted + rng.normal(0.0, spec.noise_std, size=drifted.shape)
    return ref.with_features(drifted, day=spec.day_id or ref.day)


def invert_drift(day: LabeledWindows, spec: DriftSpec) -> FloatArray:
    """Exact inverse of the noiseless transform"""
    return np.linalg.solve(spec.mixing, day.features - spec.offset[:, None])


def simulate_days(
    geom: GestureGeometry,
    days: int,
    kind: DriftKind | str,
    magnitude: float,
    noise_std: float,
    seed: int,
) -> tuple[LabeledWindows, list[tuple[DriftSpec, LabeledWindows]]]:
    """Reference day plus days 2..days, day d drawn with seed + d"""
    reference = gen_reference(geom, seed, day="1")
    later = []
    for d in range(2, days + 1):
        spec = make_drift(kind, magnitude, seed + d, geom.n_channels, noise_std, day_id=str(d))
        later.append((spec, apply_drift(reference, spec, seed + d)))
    return reference, later


class SimulatedDaySource(IDaySource):
    """Day source backed by the drift simulator; day d uses seed + d"""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        geometry = config.geometry
        self.geometry = make_geometry(
            n_channels=geometry.n_channels,
            n_gestures=geometry.n_gestures,
            within_std=geometry.within_std,
            reps_per_gesture=geometry.reps_per_gesture,
            windows_per_rep=geometry.windows_per_rep,
            seed=config.seed,
            low=geometry.prototype_low,
            high=geometry.prototype_high,
        )
        self._reference: LabeledWindows | None = None

    @property
    def day_count(self) -> int:
        return self.config.days

    def drift_spec(self, day_index: int) -> DriftSpec:
        """Ground-truth transform of a later day"""
        if not 2 <= day_index <= self.config.days:
            raise ParameterError(f"day {day_index} outside 2..{self.config.days}")
        return make_drift(
            self.config.drift.kind,
            self.config.drift.magnitude,
            self.config.seed + day_index,
            self.geometry.n_channels,
            self.config.noise_std,
            day_id=str(day_index),
        )

    def load(self, day_index: int) -> LabeledWindows:
        if self._reference is None:
            self._reference = gen_reference(self.geometry, self.config.seed, day="1")
            logger.info(f"Generated reference day: {self._reference.channels} x {self._reference.windows}")
        if day_index == 1:
            return self._reference
        return apply_drift(self._reference, self.drift_spec(day_index), self.config.seed + day_index)
