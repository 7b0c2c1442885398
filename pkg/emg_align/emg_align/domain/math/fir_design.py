# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
FIR filter design and causal filtering for multichannel recordings.
"""

import math
import numpy as np
import numpy.typing as npt
from scipy import signal as sps

from emg_align.domain.entities.signal_data import FirFilter, SignalMatrix
from emg_align.domain.exceptions import ParameterError


def _check_frequency(hz: float, sample_rate_hz: float, name: str) -> None:
    if sample_rate_hz <= 0:
        raise ParameterError(f"sample rate must be positive, got {sample_rate_hz}")
    if not 0 < hz < sample_rate_hz / 2:
        raise ParameterError(
            f"{name} {hz} Hz must lie strictly between 0 and Nyquist ({sample_rate_hz / 2} Hz)"
        )


def design_notch(center_hz: float, sample_rate_hz: float, taps: int) -> FirFilter:
    """
    Notch with an exact zero pair at center_hz and unit DC gain.

    The zero pair 1 - 2cos(w0) z^-1 + z^-2 is cascaded with a frequency-sampled,
    Hamming-windowed low-pass of taps - 2 coefficients, then scaled to unit gain
    at 0 Hz.
    """
    _check_frequency(center_hz, sample_rate_hz, "notch center")
    if taps < 3:
        raise ParameterError(f"notch needs at least 3 taps, got {taps}")

    w0 = 2 * math.pi * center_hz / sample_rate_hz
    zero_pair = np.array([1.0, -2.0 * math.cos(w0), 1.0])
    if taps == 3:
        smoother = np.ones(1)
    else:
        smoother = sps.firwin2(
            taps - 2,
            [0.0, sample_rate_hz / 2],
            [1.0, 0.0],
            window="hamming",
            fs=sample_rate_hz,
        )
    coefficients = np.convolve(zero_pair, smoother)
    coefficients /= np.sum(coefficients)
    return FirFilter(
        taps=coefficients,
        description=f"notch {center_hz:g} Hz, {taps} taps @ {sample_rate_hz:g} Hz",
    )


def design_bandpass(low_hz: float, high_hz: float, sample_rate_hz: float, taps: int) -> FirFilter:
    """Hamming-windowed sinc band-pass, unit gain at the band center"""
    _check_frequency(low_hz, sample_rate_hz, "band low edge")
    _check_frequency(high_hz, sample_rate_hz, "band high edge")
    if not low_hz < high_hz:
        raise ParameterError(f"band low edge {low_hz} Hz must be below high edge {high_hz} Hz")
    if taps < 3:
        raise ParameterError(f"band-pass needs at least 3 taps, got {taps}")

    coefficients = sps.firwin(
        taps,
        [low_hz, high_hz],
        pass_zero=False,
        window="hamming",
        fs=sample_rate_hz,
    )
    return FirFilter(
        taps=coefficients,
        description=f"band-pass {low_hz:g}-{high_hz:g} Hz, {taps} taps @ {sample_rate_hz:g} Hz",
    )


def frequency_response(f: FirFilter, hz: npt.ArrayLike, sample_rate_hz: float) -> npt.NDArray[np.complex128]:
    """H(e^jw) evaluated at the given frequencies"""
    frequencies = np.atleast_1d(np.asarray(hz, dtype=np.float64))
    _, response = sps.freqz(f.taps, [1.0], worN=frequencies, fs=sample_rate_hz)
    return response


def gain_db(f: FirFilter, hz: float, sample_rate_hz: float) -> float:
    magnitude = float(np.abs(frequency_response(f, [hz], sample_rate_hz)[0]))
    return 20.0 * math.log10(max(magnitude, 1e-300))


def apply_filter(f: FirFilter, s: SignalMatrix) -> SignalMatrix:
    """Causal per-channel convolution with zero initial history; length preserved"""
    filtered = sps.lfilter(f.taps, [1.0], s.data, axis=1)
    return SignalMatrix(data=filtered, sample_rate_hz=s.sample_rate_hz)
