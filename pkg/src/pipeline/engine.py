# =============================================================
# File: engine.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-25
# Refactored: 2026-02-04
# Description:
#     Batch synchronization engine. Produces exactly what the
#     byte-by-byte event loop produces, one reference frame at a
#     time and with numpy instead of per-byte Python:
#       * stream order fixes every FIFO address, so the address of a
#         channel byte is (active index - run base) mod capacity;
#       * the clocks fix how many channel bytes precede each read
#         (writes win ties), which says who last wrote the address.
# =============================================================

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.clocks.source import TimedStream
from src.core.config import DEFAULT_FILL_BYTE
from src.pipeline.base_operator import PixelOperator
from src.sync.fsd import frame_starts, scan_field_starts
from src.sync.trace import AlignmentTrace, TraceRow
from src.video.codec import active_to_frame
from src.video.frame import RawFrame
from src.video.geometry import FrameGeometry, active_count_before, active_offset

# Sentinel for "never primed".
_NEVER = np.iinfo(np.int64).max


@dataclass
class EngineResult:
    """
    Observable outcome of a synchronization run (identical for both engines).

    Attributes:
        reference_channel: Channel that timed the output.
        output_frames: Processed frames, in reference frame order.
        output_frame_indices: Reference frame number of each output frame.
        priming_frames: Complete reference frames skipped because a FIFO was not primed.
        incomplete_runs: Reference runs shorter than one frame of active data.
        reference_frame_starts: Frame starts seen on the reference stream.
        primed_at_units: Time each non-reference channel became primed (None if never).
        trace: Alignment statistics (and rows, when kept).
        event_count: Byte events processed across all channels.
    """

    reference_channel: int
    output_frames: List[RawFrame] = field(default_factory=list)
    output_frame_indices: List[int] = field(default_factory=list)
    priming_frames: int = 0
    incomplete_runs: int = 0
    reference_frame_starts: int = 0
    primed_at_units: Dict[int, Optional[int]] = field(default_factory=dict)
    trace: Optional[AlignmentTrace] = None
    event_count: int = 0

    @property
    def violation_count(self) -> int:
        return self.trace.violation_count if self.trace else 0


def check_streams(streams: Sequence[TimedStream], reference_channel: int) -> FrameGeometry:
    """All channels share one geometry; returns it."""
    if not streams:
        raise ValueError("at least one stream is required")
    if not 0 <= reference_channel < len(streams):
        raise ValueError(f"reference channel {reference_channel} does not exist")
    geometry = streams[0].geometry
    for stream in streams[1:]:
        if stream.geometry != geometry:
            raise ValueError(f"stream '{stream.source_id}' has a different geometry")
    return geometry


def collect_output(result: EngineResult, operator: PixelOperator, geometry: FrameGeometry,
                   frame_number: int, streams: np.ndarray) -> None:
    """Runs the pixel operator over one synchronized frame of active bytes (K, capacity)."""
    processed = operator.apply_streams(streams, geometry.layout().luma_mask)
    result.output_frames.append(active_to_frame(processed, geometry))
    result.output_frame_indices.append(frame_number)


# =============================================================
# Per-channel write model
# =============================================================
class _ChannelWriter:
    """
    Write side of one FIFO reconstructed from its stream.

    ``owner[address]`` is the active index of the last byte written to
    ``address`` among the bytes applied so far.
    """

    def __init__(self, stream: TimedStream, geometry: FrameGeometry) -> None:
        self.stream = stream
        self.geometry = geometry
        self.capacity = geometry.active_bytes_per_frame
        starts = [event.byte_offset for event in frame_starts(scan_field_starts(stream.data))]
        self.total_active = int(active_count_before(geometry, len(stream.data)))
        self.bases = active_count_before(geometry, np.asarray(starts, dtype=np.int64)).astype(np.int64)
        ends = np.append(self.bases[1:], self.total_active)
        full = self.bases[(ends - self.bases) >= self.capacity]
        self.prime_index = int(full[0] + self.capacity - 1) if len(full) else _NEVER
        self.owner = np.full(self.capacity, -1, dtype=np.int64)
        self.applied = 0
        if not len(self.bases):
            logging.warning(f"Engine: no frame start found in stream '{stream.source_id}'.")

    def addresses(self, indices: np.ndarray) -> np.ndarray:
        """FIFO address of each active index; -1 for bytes before the first frame start."""
        run = np.searchsorted(self.bases, indices, side="right") - 1
        address = (indices - self.bases[np.maximum(run, 0)]) % self.capacity if len(self.bases) else indices
        return np.where(run >= 0, address, -1)

    def written_through(self, time_units: np.ndarray) -> np.ndarray:
        """Active bytes emitted at or before each time (writes win ties)."""
        model = self.stream.model
        emitted = model.edges_through(time_units) - self.stream.edge_offset
        emitted = np.clip(emitted, 0, len(self.stream.data))
        return active_count_before(self.geometry, emitted)

    def apply_until(self, stop: int) -> None:
        """Applies writes ``[applied, stop)`` to ``owner`` (last write per address wins)."""
        if stop <= self.applied:
            return
        indices = np.arange(self.applied, stop, dtype=np.int64)
        address = self.addresses(indices)
        keep = address >= 0
        indices, address = indices[keep], address[keep]
        if len(indices):
            order = np.argsort(address, kind="stable")
            sorted_address = address[order]
            last = np.append(sorted_address[1:] != sorted_address[:-1], True)
            self.owner[sorted_address[last]] = indices[order][last]
        self.applied = stop

    def lookup(self, read_address: np.ndarray, written: np.ndarray) -> np.ndarray:
        """
        Active index held at ``read_address[n]`` after ``written[n]`` writes.

        ``written`` is non-decreasing. Returns -1 where nothing was written.
        """
        low, high = int(written[0]), int(written[-1])
        self.apply_until(low)
        holder = self.owner[read_address].copy()
        if high > low:
            span = high - low + 1
            indices = np.arange(low, high, dtype=np.int64)
            address = self.addresses(indices)
            keep = address >= 0
            if not keep.any():
                return holder
            keys = np.sort(address[keep] * span + (indices[keep] - low))
            query = read_address * span + (written - low)
            position = np.searchsorted(keys, query, side="left") - 1
            found = position >= 0
            candidate = keys[np.maximum(position, 0)]
            found &= (candidate // span) == read_address
            holder = np.where(found, low + candidate % span, holder)
        return holder


# =============================================================
# Batch engine
# =============================================================
def run_batch(streams: Sequence[TimedStream], reference_channel: int, operator: PixelOperator,
              fill_byte: int = DEFAULT_FILL_BYTE, include_priming: bool = False,
              keep_trace: bool = False) -> EngineResult:
    """
    Synchronizes K timed streams frame by frame.

    Args:
        streams: One timed stream per channel (shared geometry).
        reference_channel: Channel whose clock times the output.
        operator: Pixel operator of arity K.
        fill_byte: Output of channels that are not primed yet.
        include_priming: Also output frames read before every FIFO was primed.
        keep_trace: Keep one TraceRow per active read tick.

    Returns:
        The EngineResult.
    """
    geometry = check_streams(streams, reference_channel)
    capacity = geometry.active_bytes_per_frame
    count = len(streams)
    reference = streams[reference_channel]
    result = EngineResult(reference_channel, event_count=sum(len(stream) for stream in streams))
    result.trace = AlignmentTrace(count, reference_channel, keep_rows=keep_trace)

    writers: Dict[int, _ChannelWriter] = {
        channel: _ChannelWriter(stream, geometry)
        for channel, stream in enumerate(streams)
        if channel != reference_channel
    }
    for channel, writer in writers.items():
        if writer.prime_index == _NEVER:
            result.primed_at_units[channel] = None
        else:
            offset = active_offset(geometry, writer.prime_index)
            result.primed_at_units[channel] = int(writer.stream.time_units(int(offset), int(offset) + 1)[0])

    ref_starts = [event.byte_offset for event in frame_starts(scan_field_starts(reference.data))]
    result.reference_frame_starts = len(ref_starts)
    ref_bases = active_count_before(geometry, np.asarray(ref_starts, dtype=np.int64))
    ref_ends = np.append(ref_bases[1:], active_count_before(geometry, len(reference.data)))

    for start_offset, base, end in zip(ref_starts, ref_bases.tolist(), ref_ends.tolist()):
        length = end - base
        if length <= 0:
            continue
        ticks = np.arange(base, end, dtype=np.int64)
        offsets = active_offset(geometry, ticks)
        times = reference.model.edge_units(offsets + reference.edge_offset)
        slots = ticks % capacity
        read_address = np.arange(length, dtype=np.int64) % capacity

        values = np.empty((count, length), dtype=np.uint8)
        values[reference_channel] = reference.data[offsets]
        all_primed = np.ones(length, dtype=bool)
        misplaced = np.zeros(length, dtype=bool)
        holders: Dict[int, np.ndarray] = {}
        for channel, writer in writers.items():
            written = writer.written_through(times)
            primed = written > writer.prime_index
            holder = writer.lookup(read_address, written)
            holders[channel] = np.where(primed, holder, -1)
            data = writer.stream.data[active_offset(geometry, np.maximum(holder, 0))]
            values[channel] = np.where(primed, data, fill_byte)
            all_primed &= primed
            misplaced |= primed & ((holder % capacity) != slots)
            result.trace.add_offsets(channel, holder[primed] // capacity - ticks[primed] // capacity)

        violations = all_primed & misplaced
        result.trace.ticks += length
        result.trace.add_violations(times[violations])
        if keep_trace:
            _keep_rows(result.trace, geometry, times, ticks, holders, violations, count, reference_channel)

        frame_number = start_offset // geometry.bytes_per_frame
        if length != capacity:
            result.incomplete_runs += 1
            logging.warning(f"Engine: reference frame {frame_number} has {length} active bytes, expected {capacity}.")
        elif all_primed[0] or include_priming:
            collect_output(result, operator, geometry, frame_number, values)
        else:
            result.priming_frames += 1
        logging.debug(f"Engine: reference frame {frame_number} done ({int(violations.sum())} violation(s)).")

    logging.info(f"Engine: {len(result.output_frames)} output frame(s), {result.priming_frames} priming, "
                 f"{result.violation_count} violation(s).")
    return result


def _keep_rows(trace: AlignmentTrace, geometry: FrameGeometry, times: np.ndarray, ticks: np.ndarray,
               holders: Dict[int, np.ndarray], violations: np.ndarray, count: int, reference_channel: int) -> None:
    layout = geometry.layout()
    capacity = geometry.active_bytes_per_frame

    def tags_of(indices: np.ndarray):
        slot = np.maximum(indices, 0) % capacity
        return zip((indices // capacity).tolist(), layout.active_line[slot].tolist(), layout.active_sample[slot].tolist())

    columns = []
    for channel in range(count):
        if channel == reference_channel:
            columns.append(list(tags_of(ticks)))
        else:
            held = holders[channel]
            columns.append([tag if index >= 0 else None for tag, index in zip(tags_of(held), held.tolist())])
    for position, (time_units, violation) in enumerate(zip(times.tolist(), violations.tolist())):
        channels = tuple(column[position] for column in columns)
        trace.rows.append(TraceRow(time_units, channels[reference_channel], channels, violation))
