# =============================================================
# File: trace.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-21
# Refactored: 2026-02-03
# Description:
#     Alignment bookkeeping for synchronized output: per-tick trace
#     rows, incremental violation and temporal-offset statistics,
#     CSV export/import and the checks behind the `verify` command.
# =============================================================

import csv
import io
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.core.config import PHASE_UNITS_PER_TICK
from src.core.errors import TraceFormatError
from src.sync.fifo import Tag
from src.video.codec import ByteSource, scan_timing_codes

FILL_MARK: int = -1


@dataclass(frozen=True)
class TraceRow:
    """
    One active read tick.

    Attributes:
        tick_units: Reference edge time (phase units).
        reference: (frame, line, sample) of the reference byte.
        channels: Tag of each channel's output byte, None for fill bytes.
        violation: True if all channels were primed and a position differed.
    """

    tick_units: int
    reference: Tag
    channels: Tuple[Optional[Tag], ...]
    violation: bool

    @property
    def tick_time_ns(self) -> float:
        return self.tick_units / PHASE_UNITS_PER_TICK


def is_violation(reference: Tag, channels: Iterable[Optional[Tag]]) -> bool:
    """Spatial check of one tick; undefined (False) while any channel emits fill."""
    channels = list(channels)
    if any(tag is None for tag in channels):
        return False
    return any(tag[1:] != reference[1:] for tag in channels)


@dataclass(frozen=True)
class OffsetStats:
    """Distribution of ``frame(channel) - frame(reference)``."""

    minimum: int
    maximum: int
    mode: int
    count: int

    def to_dict(self) -> Dict[str, int]:
        return {"min": self.minimum, "max": self.maximum, "mode": self.mode, "count": self.count}


def _stats_from_counter(counter: Counter) -> OffsetStats:
    top = max(counter.values())
    mode = min(value for value, hits in counter.items() if hits == top)
    return OffsetStats(min(counter), max(counter), mode, sum(counter.values()))


# =============================================================
# AlignmentTrace Class
# =============================================================
@dataclass
class AlignmentTrace:
    """
    Alignment record of one run.

    Statistics are accumulated incrementally; individual rows are kept
    only when ``keep_rows`` is set, so long runs stay small.
    """

    channel_count: int
    reference_channel: int = 0
    keep_rows: bool = False
    rows: List[TraceRow] = field(default_factory=list)
    ticks: int = 0
    violation_count: int = 0
    first_violation_units: Optional[int] = None
    _offsets: Dict[int, Counter] = field(default_factory=dict, repr=False)

    def add_row(self, row: TraceRow) -> None:
        """Accounts one tick (event-loop path)."""
        self.ticks += 1
        if row.violation:
            self.violation_count += 1
            if self.first_violation_units is None:
                self.first_violation_units = row.tick_units
        for channel, tag in enumerate(row.channels):
            if channel != self.reference_channel and tag is not None:
                self._offsets.setdefault(channel, Counter())[tag[0] - row.reference[0]] += 1
        if self.keep_rows:
            self.rows.append(row)

    def add_offsets(self, channel: int, offsets: np.ndarray) -> None:
        """Accounts many frame offsets of one channel at once (batch path)."""
        if not len(offsets):
            return
        values, counts = np.unique(offsets, return_counts=True)
        counter = self._offsets.setdefault(channel, Counter())
        for value, hits in zip(values.tolist(), counts.tolist()):
            counter[value] += hits

    def add_violations(self, tick_units: np.ndarray) -> None:
        """Accounts violating ticks (batch path); ``tick_units`` is sorted."""
        if not len(tick_units):
            return
        self.violation_count += len(tick_units)
        if self.first_violation_units is None:
            self.first_violation_units = int(tick_units[0])

    def offset_stats(self) -> Dict[int, OffsetStats]:
        return {channel: _stats_from_counter(counter) for channel, counter in sorted(self._offsets.items()) if counter}


def temporal_offsets(trace: AlignmentTrace) -> Dict[int, OffsetStats]:
    """
    Per-channel min/max/mode of the frame-index difference to the reference.

    Fill bytes carry no frame index and are ignored; ties for the mode go
    to the smaller offset.

    Args:
        trace: A trace that has seen at least one tick.

    Returns:
        OffsetStats keyed by channel index (reference channel excluded).
    """
    return trace.offset_stats()


# =============================================================
# CSV format
# =============================================================
def trace_header(channel_count: int) -> List[str]:
    header = ["tick_units", "tick_time_ns", "ref_frame", "ref_line", "ref_sample"]
    for channel in range(channel_count):
        header += [f"ch{channel}_frame", f"ch{channel}_line", f"ch{channel}_sample"]
    return header + ["violation"]


def format_trace_csv(trace: AlignmentTrace) -> str:
    """
    Serializes the kept rows.

    ``tick_units`` is the exact edge time; ``tick_time_ns`` is a rounded
    copy for reading. Fill bytes are written as -1 coordinates.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(trace_header(trace.channel_count))
    for row in trace.rows:
        cells = [row.tick_units, f"{row.tick_time_ns:.3f}", *row.reference]
        for tag in row.channels:
            cells += list(tag) if tag is not None else [FILL_MARK] * 3
        cells.append(int(row.violation))
        writer.writerow(cells)
    return buffer.getvalue()


def parse_trace_csv(text: str) -> List[TraceRow]:
    """
    Parses a trace CSV.

    Raises:
        TraceFormatError: On a bad header, a short row or a non-numeric cell.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise TraceFormatError("empty trace file") from None
    columns = len(header) - 6
    if columns < 0 or columns % 3 or header != trace_header(columns // 3):
        raise TraceFormatError(f"unexpected trace header: {','.join(header)}")
    rows: List[TraceRow] = []
    for number, cells in enumerate(reader, start=2):
        if not cells:
            continue
        if len(cells) != len(header):
            raise TraceFormatError(f"line {number}: expected {len(header)} cells, got {len(cells)}")
        try:
            tick_units = int(cells[0])
            float(cells[1])
            numbers = [int(cell) for cell in cells[2:]]
        except ValueError as exc:
            raise TraceFormatError(f"line {number}: {exc}") from exc
        reference = tuple(numbers[:3])
        channels = []
        for start in range(3, len(numbers) - 1, 3):
            tag = tuple(numbers[start:start + 3])
            channels.append(None if tag[0] == FILL_MARK else tag)
        rows.append(TraceRow(tick_units, reference, tuple(channels), bool(numbers[-1])))
    return rows


# =============================================================
# Verification
# =============================================================
@dataclass(frozen=True)
class VerificationResult:
    """Outcome of a `verify` run."""

    checked: int
    violation_count: int
    first_violation: Optional[str]

    @property
    def ok(self) -> bool:
        return self.violation_count == 0


def verify_trace(rows: List[TraceRow]) -> VerificationResult:
    """
    Re-checks every row of a trace.

    A row counts as a violation if its recorded flag is set or if its
    coordinates disagree while no channel emits fill.
    """
    violations = 0
    first = None
    for row in rows:
        if row.violation or is_violation(row.reference, row.channels):
            violations += 1
            if first is None:
                first = f"tick {row.tick_time_ns:.3f} ns"
    if violations:
        logging.warning(f"Verify: {violations} violation(s) in {len(rows)} trace rows, first at {first}.")
    return VerificationResult(len(rows), violations, first)


def verify_dumps(first_dump: ByteSource, second_dump: ByteSource) -> VerificationResult:
    """
    Compares the timing structure of two synchronized dumps.

    A violation is a timing-code position present in one dump but not in
    the other (or carrying different flags).
    """
    first_codes, _ = scan_timing_codes(first_dump)
    second_codes, _ = scan_timing_codes(second_dump)
    first_set = {(event.offset, event.code) for event in first_codes}
    second_set = {(event.offset, event.code) for event in second_codes}
    mismatched = sorted(first_set ^ second_set, key=lambda item: item[0])
    first = f"byte offset {mismatched[0][0]}" if mismatched else None
    if mismatched:
        logging.warning(f"Verify: {len(mismatched)} timing-code mismatch(es), first at {first}.")
    return VerificationResult(len(first_set | second_set), len(mismatched), first)
