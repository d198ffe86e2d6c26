# =============================================================
# File: measurement.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-16
# Description:
#     Clock statistics from edge timestamps: the mean frequency of
#     each measurement window, then min/mean/max over the windows.
# =============================================================

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from src.clocks.clock_model import ClockModel
from src.core.config import (
    DEFAULT_MEASUREMENT_MAX_WINDOWS,
    DEFAULT_MEASUREMENT_WINDOW,
    PHASE_UNITS_PER_SECOND,
    TICKS_PER_SECOND,
)
from src.core.errors import InsufficientDataError, MeasurementError
from src.core.sim_time import SimTime


@dataclass(frozen=True)
class ClockStats:
    """
    Frequency statistics of one clock.

    Attributes:
        min_hz: Slowest window.
        mean_hz: Mean over windows.
        max_hz: Fastest window.
        sample_count: Edges used.
        nominal_hz: Nominal frequency, when known (enables the ppm views).
    """

    min_hz: float
    mean_hz: float
    max_hz: float
    sample_count: int
    nominal_hz: Optional[float] = None

    def ppm(self, hz: float) -> float:
        """Deviation of ``hz`` from nominal, in ppm."""
        if not self.nominal_hz:
            raise MeasurementError("nominal frequency unknown")
        return (hz - self.nominal_hz) / self.nominal_hz * 1e6

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "min_hz": self.min_hz,
            "mean_hz": self.mean_hz,
            "max_hz": self.max_hz,
            "sample_count": self.sample_count,
        }
        if self.nominal_hz:
            data.update(
                min_ppm=self.ppm(self.min_hz),
                mean_ppm=self.ppm(self.mean_hz),
                max_ppm=self.ppm(self.max_hz),
            )
        return data


def _stats(frequencies: np.ndarray, window: int, nominal_hz: Optional[float]) -> ClockStats:
    low, high = float(frequencies.min()), float(frequencies.max())
    mean = min(high, max(low, float(frequencies.mean())))
    return ClockStats(low, mean, high, int(len(frequencies) * window), nominal_hz)


def _frequencies_from_units(spans: np.ndarray, window: int) -> np.ndarray:
    if np.any(spans <= 0):
        raise MeasurementError("edge times must be strictly increasing")
    return float((window - 1) * PHASE_UNITS_PER_SECOND) / spans.astype(np.float64)


def measure_clock(edge_times: Union[Sequence[SimTime], np.ndarray], window: int = DEFAULT_MEASUREMENT_WINDOW,
                  nominal_hz: Optional[float] = None) -> ClockStats:
    """
    Measures a clock from consecutive edge times.

    The edges are split into consecutive non-overlapping windows; a
    trailing partial window is ignored.

    Args:
        edge_times: SimTimes, or an int64 array of phase-grid units.
        window: Edges per window (>= 2).
        nominal_hz: Optional nominal frequency for ppm reporting.

    Returns:
        ClockStats over all complete windows.

    Raises:
        InsufficientDataError: If fewer than ``window`` edges are given.
        MeasurementError: If ``window`` < 2 or times are not increasing.
    """
    if window < 2:
        raise MeasurementError(f"window must be at least 2, got {window}")
    if len(edge_times) < window:
        raise InsufficientDataError(window, len(edge_times))
    windows = len(edge_times) // window

    if isinstance(edge_times, np.ndarray):
        units = edge_times.astype(np.int64)[: windows * window].reshape(windows, window)
        if np.any(np.diff(units, axis=1) <= 0):
            raise MeasurementError("edge times must be strictly increasing")
        return _stats(_frequencies_from_units(units[:, -1] - units[:, 0], window), window, nominal_hz)

    # Exact rational spans; converted to float only for the final ratio.
    frequencies = []
    for index in range(windows):
        times = edge_times[index * window:(index + 1) * window]
        if any(later <= earlier for earlier, later in zip(times, times[1:])):
            raise MeasurementError("edge times must be strictly increasing")
        span = times[-1].difference_ns(times[0])
        frequencies.append(float(Fraction((window - 1) * TICKS_PER_SECOND) / span))
    return _stats(np.asarray(frequencies), window, nominal_hz)


def measure_source_clock(model: ClockModel, edge_count: int, window: int = DEFAULT_MEASUREMENT_WINDOW,
                         max_windows: int = DEFAULT_MEASUREMENT_MAX_WINDOWS) -> ClockStats:
    """
    Measures a clock model over its first ``edge_count`` edges.

    Up to ``max_windows`` windows are spread evenly across the run, so a
    long capture is characterised without timing every edge.

    Args:
        model: The clock to measure.
        edge_count: Length of the capture in edges.
        window: Edges per window.
        max_windows: Upper bound on the number of windows.
    """
    if window < 2:
        raise MeasurementError(f"window must be at least 2, got {window}")
    if edge_count < window:
        raise InsufficientDataError(window, edge_count)
    windows = max(1, min(max_windows, edge_count // window))
    firsts = np.linspace(0, edge_count - window, windows).astype(np.int64)
    spans = model.edge_units(firsts + window - 1) - model.edge_units(firsts)
    stats = _stats(_frequencies_from_units(spans, window), window, float(model.nominal_hz))
    logging.debug(f"Measurement: {windows} windows of {window} edges, mean {stats.mean_hz:.3f} Hz.")
    return stats
