# =============================================================
# File: config.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2025-11-22
# Refactored: 2026-02-03
# Description:
#     Central configuration module for the simulator.
#     Contains shared constants and data structures used by the
#     clock, codec, synchronization, pipeline and CLI layers.
# =============================================================

import logging
from typing import Dict, List, Any

# =============================================================
# Time base
# =============================================================
# SimTime ticks are nanoseconds. Clock edges live on a finer phase grid
# so that one 27 MHz period is an exact integer number of phase units.
TICKS_PER_SECOND: int = 1_000_000_000
PHASE_UNITS_PER_TICK: int = 27_000_000
PHASE_UNITS_PER_SECOND: int = TICKS_PER_SECOND * PHASE_UNITS_PER_TICK

# int64 phase units overflow after ~341 s of simulated time.
MAX_SIMULATED_SECONDS: int = 300

# =============================================================
# Clock defaults
# =============================================================
DEFAULT_NOMINAL_HZ: int = 27_000_000
DEFAULT_MAX_DRIFT_PPM: float = 100.0
DEFAULT_MEASUREMENT_WINDOW: int = 300
DEFAULT_MEASUREMENT_MAX_WINDOWS: int = 4096

DRIFT_KINDS: List[str] = ["none", "constant", "sinusoidal", "random_walk"]

# One NTSC frame (900,900 bytes at 27 MHz); random walks step this often by default.
DEFAULT_DRIFT_INTERVAL_S: float = 1001 / 30000

# Seed fan-out purposes (third word of the SeedSequence entropy).
SEED_PURPOSE_DRIFT: int = 0
SEED_PURPOSE_CONTENT: int = 1

# =============================================================
# BT.656 byte values
# =============================================================
SYNC_PREFIX: bytes = b"\xff\x00\x00"
CHROMA_BLANK: int = 0x80
LUMA_BLANK: int = 0x10
DATA_MIN: int = 0x01
DATA_MAX: int = 0xFE
DEFAULT_FILL_BYTE: int = LUMA_BLANK

# =============================================================
# Geometry profiles
# =============================================================
GEOMETRY_PROFILES: Dict[str, Dict[str, Any]] = {
    "ntsc": {
        "lines_total": 525,
        "samples_total": 858,
        "samples_active": 720,
        "lines_active_per_field": 240,
        "interlaced": True,
        "first_active_line": 20,
    },
    "desk": {
        "lines_total": 80,
        "samples_total": 128,
        "samples_active": 96,
        "lines_active_per_field": 32,
        "interlaced": True,
        "first_active_line": 5,
    },
}

# =============================================================
# Pipeline components
# =============================================================
OPERATOR_NAMES: List[str] = ["passthrough", "average", "luma_max"]
CONTENT_NAMES: List[str] = ["constant", "gradient", "noise", "numbered"]
ENGINE_NAMES: List[str] = ["batch", "event"]

# =============================================================
# Scenario files and CLI
# =============================================================
SCHEMA_VERSION: int = 1
STREAM_DUMP_SUFFIX: str = ".656"

EXIT_OK: int = 0
EXIT_VERIFICATION_FAILED: int = 1
EXIT_USAGE: int = 2
EXIT_IO: int = 3

logging.debug("Configuration module loaded.")
