# =============================================================
# File: errors.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-14
# Description:
#     Exception hierarchy shared by every layer of the simulator.
#     The CLI maps these onto its exit-code contract.
# =============================================================

from typing import Optional


class SimulatorError(Exception):
    """Base class for every error raised by the simulator."""


# =============================================================
# Configuration and geometry
# =============================================================
class ConfigError(SimulatorError):
    """
    Raised when a scenario, budget or policy is invalid.

    Args:
        field: Dotted path of the offending field (e.g. "sources[1].drift.kind").
        message: Human readable description of the problem.
    """

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class GeometryError(SimulatorError):
    """Raised when a frame does not match a FrameGeometry or a geometry is inconsistent."""


# =============================================================
# Timing reference codes
# =============================================================
class TimingCodeError(SimulatorError):
    """Base class for XY byte parse failures."""


class NotACodeError(TimingCodeError):
    """The byte has bit 7 clear and cannot be a timing reference XY byte."""

    def __init__(self, found: int) -> None:
        self.found = found
        super().__init__(f"0x{found:02X} is not a timing reference code (bit 7 clear)")


class CorruptedCodeError(TimingCodeError):
    """The protection bits do not match the F, V and H flags."""

    def __init__(self, expected: int, found: int) -> None:
        self.expected = expected
        self.found = found
        super().__init__(f"corrupted timing code: expected 0x{expected:02X}, found 0x{found:02X}")


# =============================================================
# Measurement, processing, traces, power
# =============================================================
class MeasurementError(SimulatorError):
    """Raised when clock statistics cannot be computed."""


class InsufficientDataError(MeasurementError):
    """Fewer samples were supplied than a measurement window needs."""

    def __init__(self, required: int, available: int) -> None:
        self.required = required
        self.available = available
        super().__init__(f"insufficient data: need {required} samples, got {available}")


class OperatorError(SimulatorError):
    """Raised when a pixel operator receives the wrong number of inputs."""


class TraceFormatError(SimulatorError):
    """Raised when an alignment trace file cannot be parsed."""


class PowerBudgetError(SimulatorError):
    """Raised on invalid power budget inputs."""


class ArtifactIOError(SimulatorError):
    """
    Raised when an artifact cannot be read or written.

    Args:
        path: The file involved.
        reason: The underlying OS error text.
    """

    def __init__(self, path: str, reason: Optional[str] = None) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}" if reason else path)
