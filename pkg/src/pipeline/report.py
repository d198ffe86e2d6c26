# =============================================================
# File: report.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-28
# Description:
#     SimulationReport: the JSON summary of one scenario run. Field
#     names are frozen (see "report.json" in docs/scenario_format_en.md);
#     values depend only on the scenario and its seed unless wall-clock
#     timing is requested.
# =============================================================

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence

from src.clocks.measurement import ClockStats
from src.clocks.source import TimedStream
from src.core.config import PHASE_UNITS_PER_TICK, SCHEMA_VERSION
from src.sync.fsd import frame_starts, scan_field_starts


def units_to_ns_float(units: Optional[int]) -> Optional[float]:
    """Phase units as float nanoseconds (None passes through)."""
    if units is None:
        return None
    return float(Fraction(int(units), PHASE_UNITS_PER_TICK))


def first_frame_start_units(stream: TimedStream) -> Optional[int]:
    """Emission time of the first frame start (F = 0 field start) of a stream."""
    starts = frame_starts(scan_field_starts(stream.data))
    if not starts:
        return None
    offset = starts[0].byte_offset
    return int(stream.time_units(offset, offset + 1)[0])


@dataclass(frozen=True)
class SourceReport:
    """Per-source section of the report."""

    id: str
    nominal_hz: float
    drift: Dict[str, Any]
    startup_delay_ns: float
    byte_count: int
    clock: ClockStats
    first_frame_start_units: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "nominal_hz": self.nominal_hz,
            "drift": self.drift,
            "startup_delay_ns": self.startup_delay_ns,
            "byte_count": self.byte_count,
            "clock": self.clock.to_dict(),
            "first_frame_start_ns": units_to_ns_float(self.first_frame_start_units),
        }


def describe_source(stream: TimedStream, clock: ClockStats) -> SourceReport:
    model = stream.model
    return SourceReport(
        id=stream.source_id,
        nominal_hz=float(model.nominal_hz),
        drift=model.drift.describe(),
        startup_delay_ns=float(model.startup_delay.exact_ns),
        byte_count=len(stream),
        clock=clock,
        first_frame_start_units=first_frame_start_units(stream),
    )


def startup_deltas(sources: Sequence[SourceReport]) -> List[Dict[str, Any]]:
    """
    Pairwise differences of first frame-start times (later minus earlier
    source in scenario order). Pairs where either source never starts a
    frame report None.
    """
    deltas = []
    for first, second in combinations(sources, 2):
        delta = None
        if first.first_frame_start_units is not None and second.first_frame_start_units is not None:
            delta = units_to_ns_float(second.first_frame_start_units - first.first_frame_start_units)
        deltas.append({"from": first.id, "to": second.id, "delta_ns": delta})
    return deltas


# =============================================================
# SimulationReport
# =============================================================
@dataclass
class SimulationReport:
    """
    Everything a scenario run measured.

    ``violation_count`` always equals the AlignmentTrace count of the run.
    """

    scenario: str
    geometry: str
    engine: str
    seed: int
    operator: str
    reference_policy: str
    reference_channel: int
    sources: List[SourceReport]
    violation_count: int = 0
    first_violation_units: Optional[int] = None
    checked_ticks: int = 0
    temporal_offsets: Dict[str, Dict[str, int]] = field(default_factory=dict)
    output_frame_count: int = 0
    first_output_frame: Optional[int] = None
    priming_frames: int = 0
    incomplete_runs: int = 0
    reference_frame_starts: int = 0
    primed_at_units: Dict[str, Optional[int]] = field(default_factory=dict)
    event_count: int = 0
    wall_clock_s: Optional[float] = None

    @property
    def reference_id(self) -> str:
        return self.sources[self.reference_channel].id

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "scenario": self.scenario,
            "geometry": self.geometry,
            "engine": self.engine,
            "seed": self.seed,
            "operator": self.operator,
            "reference_policy": self.reference_policy,
            "reference_channel": self.reference_channel,
            "reference_id": self.reference_id,
            "sources": [source.to_dict() for source in self.sources],
            "startup_deltas": startup_deltas(self.sources),
            "violation_count": self.violation_count,
            "first_violation_ns": units_to_ns_float(self.first_violation_units),
            "checked_ticks": self.checked_ticks,
            "temporal_offsets": self.temporal_offsets,
            "output_frame_count": self.output_frame_count,
            "first_output_frame": self.first_output_frame,
            "priming_frames": self.priming_frames,
            "incomplete_runs": self.incomplete_runs,
            "reference_frame_starts": self.reference_frame_starts,
            "primed_at_ns": {key: units_to_ns_float(value) for key, value in self.primed_at_units.items()},
            "event_count": self.event_count,
        }
        if include_timing and self.wall_clock_s is not None:
            data["wall_clock_s"] = self.wall_clock_s
        return data

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2) + "\n"


def format_summary(report: SimulationReport) -> str:
    """Short human-readable summary printed by `simulate`."""
    lines = [
        f"scenario {report.scenario}: {report.output_frame_count} output frame(s), "
        f"{report.priming_frames} priming, {report.violation_count} violation(s)",
        f"reference: {report.reference_id} ({report.reference_policy})",
    ]
    for channel, stats in report.temporal_offsets.items():
        lines.append(f"  {channel}: temporal offset {stats['min']}..{stats['max']} (mode {stats['mode']})")
    if report.wall_clock_s is not None:
        lines.append(f"wall clock: {report.wall_clock_s:.2f} s")
    return "\n".join(lines)
