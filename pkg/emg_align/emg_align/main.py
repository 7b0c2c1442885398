# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Main entry point for the emg_align command-line tool
"""

import sys

from emg_align.presentation.cli import main as cli_main


def main() -> None:
    """Entry point"""
    sys.exit(cli_main())


if __name__ == '__main__':
    main()
