# =============================================================
# File: main.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2025-10-12
# Refactored: 2026-02-05
# Description:
#     Entry point for the Multi-Video Sync Simulator.
#     Parses the command line, configures logging and runs one
#     subcommand (see src/cli/commands.py).
# =============================================================

import logging
import sys
from typing import Optional, Sequence

from src.cli.commands import run
from src.core.config import EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> None:
    """
    Runs the simulator CLI and exits with its status code.

    Unexpected errors are logged as critical and reported as a usage
    failure (exit code 2).
    """
    try:
        code = run(argv)
    except Exception as e:
        logging.critical(f"A critical error occurred: {e}", exc_info=True)
        sys.exit(EXIT_USAGE)
    sys.exit(code)


if __name__ == "__main__":
    main()
