# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Multi-day sEMG gesture classification kept stable with canonical correlation analysis.
"""

__version__ = "0.1.0"
