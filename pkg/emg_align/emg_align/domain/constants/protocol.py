# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Acquisition protocol constants.
Recording setup and feature extraction parameters of the multi-day gesture dataset.
"""

SAMPLE_RATE_HZ = 4000.0
N_CHANNELS = 8

# Power line notch and band-pass stages
NOTCH_HZ = 50.0
NOTCH_TAPS = 10
BAND_LOW_HZ = 2.0
BAND_HIGH_HZ = 1000.0
BAND_TAPS = 15

# RMS windowing
WINDOW_MS = 300.0
SLIDE_MS = 100.0

# Session layout: 8 gestures x 8 repetitions, ~3 s contraction, 3 s rest
N_GESTURES = 8
REPS_PER_GESTURE = 8
TRIAL_SECONDS = 3.0
REST_SECONDS = 3.0
# floor((3 s - 300 ms) / 100 ms) + 1
WINDOWS_PER_REP = 28

REST_LABEL = -1

GESTURE_NAMES = {
    0: "palm",
    1: "fist",
    2: "index",
    3: "pinky",
    4: "supination",
    5: "pronation",
    6: "ily_sign",
    7: "thumb_up",
}
