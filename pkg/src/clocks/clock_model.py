# =============================================================
# File: clock_model.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-10
# Refactored: 2026-02-02
# Description:
#     ClockModel: a drifting oscillator with a startup delay. Edge
#     times live on the integer phase grid (see sim_time.py). The
#     drift profile is sampled once per segment of ``step_edges``
#     edges; inside a segment the period is constant.
# =============================================================

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple, Union

import numpy as np

from src.clocks.drift import DriftProfile, NoDrift
from src.core.config import DEFAULT_NOMINAL_HZ, PHASE_UNITS_PER_SECOND
from src.core.sim_time import SimTime, ZERO

# Segments are appended to the table in blocks of this many.
_SEGMENT_BLOCK: int = 4096

# Bytes per NTSC line; one profile sample per line by default.
DEFAULT_STEP_EDGES: int = 1716


class _SegmentTable:
    """Lazily grown (start, period) table of a time-varying clock."""

    def __init__(self) -> None:
        self.starts: np.ndarray = np.zeros(0, dtype=np.int64)
        self.periods: np.ndarray = np.zeros(0, dtype=np.int64)


# =============================================================
# ClockModel Class
# =============================================================
@dataclass(frozen=True)
class ClockModel:
    """
    A drifting clock.

    Attributes:
        nominal_hz: Nominal frequency (exact rational).
        drift: Drift profile.
        startup_delay: Time of edge 0.
        step_edges: Edges per drift segment.
    """

    nominal_hz: Fraction = Fraction(DEFAULT_NOMINAL_HZ)
    drift: DriftProfile = field(default_factory=NoDrift)
    startup_delay: SimTime = ZERO
    step_edges: int = DEFAULT_STEP_EDGES
    _table: _SegmentTable = field(default_factory=_SegmentTable, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nominal_hz", Fraction(self.nominal_hz))
        if self.nominal_hz <= 0:
            raise ValueError(f"nominal_hz must be positive, got {self.nominal_hz}")
        if self.step_edges < 1:
            raise ValueError("step_edges must be at least 1")
        if not isinstance(self.startup_delay, SimTime):
            object.__setattr__(self, "startup_delay", SimTime.from_ns(self.startup_delay))
        try:
            self.startup_delay.units
        except ValueError as exc:
            raise ValueError(f"startup_delay {self.startup_delay} is finer than the phase grid") from exc

    # =============================================================
    # Periods
    # =============================================================
    @property
    def nominal_period_units(self) -> Fraction:
        """Exact nominal period in phase units."""
        return PHASE_UNITS_PER_SECOND / self.nominal_hz

    @property
    def period_bounds(self) -> Tuple[int, int]:
        """Smallest and largest admissible period, in phase units."""
        nominal = self.nominal_period_units
        bound = Fraction(self.drift.bound_ppm) / 1_000_000
        low = math.ceil(nominal * (1 - bound))
        high = math.floor(nominal * (1 + bound))
        if low > high:
            low = high = round(nominal)
        return low, high

    def period_units(self, ppm: float) -> int:
        """
        Period of an edge emitted while the deviation is ``ppm``.

        The ideal period ``nominal / (1 + ppm * 1e-6)`` is rounded to the
        grid, then clamped so every period stays within the bound.
        """
        low, high = self.period_bounds
        ideal = float(self.nominal_period_units) / (1.0 + ppm * 1e-6)
        return min(high, max(low, int(round(ideal))))

    @property
    def delay_units(self) -> int:
        return self.startup_delay.units

    # =============================================================
    # Segment table
    # =============================================================
    def _segments(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        """Returns at least ``count`` segments of a time-varying clock."""
        table = self._table
        have = len(table.starts)
        if have >= count:
            return table.starts, table.periods
        target = max(count, have + _SEGMENT_BLOCK)
        starts: List[int] = table.starts.tolist()
        periods: List[int] = table.periods.tolist()
        start = starts[-1] + self.step_edges * periods[-1] if starts else self.delay_units
        for _ in range(have, target):
            period = self.period_units(self.drift.ppm_at(start / PHASE_UNITS_PER_SECOND))
            starts.append(start)
            periods.append(period)
            start += self.step_edges * period
        table.starts = np.asarray(starts, dtype=np.int64)
        table.periods = np.asarray(periods, dtype=np.int64)
        logging.debug(f"ClockModel: segment table grown to {target} segments.")
        return table.starts, table.periods

    # =============================================================
    # Edge times
    # =============================================================
    def edge_unit(self, edge_index: int) -> int:
        """Exact phase-grid time of one edge."""
        if edge_index < 0:
            raise ValueError(f"edge_index must be non-negative, got {edge_index}")
        if self.drift.is_static:
            return self.delay_units + edge_index * self.period_units(self.drift.ppm_at(0.0))
        segment, within = divmod(int(edge_index), self.step_edges)
        starts, periods = self._segments(segment + 1)
        return int(starts[segment]) + within * int(periods[segment])

    def edge_units(self, indices: Union[np.ndarray, range]) -> np.ndarray:
        """
        Vectorized edge times.

        Args:
            indices: Non-negative edge indices.

        Returns:
            int64 phase-grid times.
        """
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size == 0:
            return np.zeros(indices.shape, dtype=np.int64)
        if self.drift.is_static:
            return self.delay_units + indices * self.period_units(self.drift.ppm_at(0.0))
        segment, within = np.divmod(indices, self.step_edges)
        starts, periods = self._segments(int(segment.max()) + 1)
        return starts[segment] + within * periods[segment]

    def edges_through(self, units: Union[np.ndarray, int]) -> np.ndarray:
        """
        Number of edges with time <= ``units`` (vectorized).

        Args:
            units: Phase-grid times.
        """
        units = np.asarray(units, dtype=np.int64)
        elapsed = units - self.delay_units
        if self.drift.is_static:
            period = self.period_units(self.drift.ppm_at(0.0))
            return np.where(elapsed < 0, 0, elapsed // period + 1)
        low, _ = self.period_bounds
        horizon = int(max(int(elapsed.max()), 0) // (low * self.step_edges)) + 2
        starts, periods = self._segments(horizon)
        segment = np.searchsorted(starts, units, side="right") - 1
        safe = np.maximum(segment, 0)
        within = np.minimum((units - starts[safe]) // periods[safe] + 1, self.step_edges)
        return np.where(segment < 0, 0, safe * self.step_edges + within)

    def next_edge(self, edge_index: int) -> SimTime:
        """See the module-level ``next_edge``."""
        return SimTime.from_units(self.edge_unit(edge_index))

    def instantaneous_frequency(self, t: SimTime) -> float:
        """See the module-level ``instantaneous_frequency``."""
        nominal = float(self.nominal_hz)
        return nominal + nominal * self.drift.ppm_at(float(t.seconds)) / 1e6


# =============================================================
# Functional interface
# =============================================================
def next_edge(model: ClockModel, edge_index: int) -> SimTime:
    """
    Emission time of rising edge number ``edge_index``.

    Args:
        model: The clock.
        edge_index: Edge number (>= 0); edge 0 fires at the startup delay.

    Returns:
        The exact edge time.
    """
    return model.next_edge(edge_index)


def instantaneous_frequency(model: ClockModel, t: SimTime) -> float:
    """
    Clock frequency at time ``t`` in Hz.

    Args:
        model: The clock.
        t: Simulation time.

    Returns:
        ``nominal_hz * (1 + ppm(t) * 1e-6)``.
    """
    return model.instantaneous_frequency(t)
