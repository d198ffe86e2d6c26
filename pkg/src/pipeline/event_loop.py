# =============================================================
# File: event_loop.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-26
# Refactored: 2026-02-04
# Description:
#     The literal discrete-event simulation: every byte of every
#     channel becomes one event, merged into global time order and
#     fed through the detectors and the SyncModule one at a time.
#     Slow, simple and the reference the batch engine is checked
#     against.
# =============================================================

import heapq
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.clocks.source import TimedByte, TimedStream
from src.core.config import DEFAULT_FILL_BYTE
from src.core.sim_time import SimTime
from src.pipeline.base_operator import PixelOperator
from src.pipeline.engine import EngineResult, check_streams, collect_output
from src.sync.sync_module import SyncModule
from src.video.geometry import Region

WRITE, READ = 0, 1

# Bytes whose edge times are computed per call to the clock model.
_TIME_CHUNK: int = 65536

# (time_units, kind, channel, offset)
Event = Tuple[int, int, int, int]


def channel_events(stream: TimedStream, channel: int, kind: int) -> Iterator[Event]:
    """Yields one event per byte of ``stream`` in stream order."""
    for start in range(0, len(stream), _TIME_CHUNK):
        times = stream.time_units(start, start + _TIME_CHUNK).tolist()
        for position, time_units in enumerate(times):
            yield time_units, kind, channel, start + position


def merged_events(streams: Sequence[TimedStream], reference_channel: int) -> Iterator[Event]:
    """
    All byte events in global order: by time, then writes before reads,
    then channel index. Per-channel order is preserved.
    """
    sources = [
        channel_events(stream, channel, READ if channel == reference_channel else WRITE)
        for channel, stream in enumerate(streams)
    ]
    return heapq.merge(*sources)


class _Run:
    """Active output collected since the last reference frame start."""

    def __init__(self, frame_number: int) -> None:
        self.frame_number = frame_number
        self.values: List[Tuple[int, ...]] = []
        self.primed_at_start: Optional[bool] = None


def run_event_loop(streams: Sequence[TimedStream], reference_channel: int, operator: PixelOperator,
                   fill_byte: int = DEFAULT_FILL_BYTE, include_priming: bool = False,
                   keep_trace: bool = False) -> EngineResult:
    """
    Synchronizes K timed streams byte by byte.

    Same arguments and result as ``run_batch``.
    """
    geometry = check_streams(streams, reference_channel)
    capacity = geometry.active_bytes_per_frame
    count = len(streams)
    sync = SyncModule(count, reference_channel, geometry, fill_byte=fill_byte, keep_trace=keep_trace)
    result = EngineResult(reference_channel, trace=sync.trace)
    result.primed_at_units = {channel: None for channel in sync.fifos}

    run: Optional[_Run] = None

    def close(current: Optional[_Run]) -> None:
        if current is None or not current.values:
            return
        if len(current.values) != capacity:
            result.incomplete_runs += 1
            logging.warning(f"EventLoop: reference frame {current.frame_number} has {len(current.values)} "
                            f"active bytes, expected {capacity}.")
        elif current.primed_at_start or include_priming:
            collect_output(result, operator, geometry, current.frame_number,
                           np.asarray(current.values, dtype=np.uint8).T)
        else:
            result.priming_frames += 1

    for time_units, kind, channel, offset in merged_events(streams, reference_channel):
        result.event_count += 1
        stream = streams[channel]
        byte = TimedByte(SimTime.from_units(time_units), int(stream.data[offset]), stream.provenance(offset))
        if kind == WRITE:
            fifo = sync.fifos[channel]
            was_primed = fifo.primed
            sync.write_tick(channel, byte)
            if fifo.primed and not was_primed:
                result.primed_at_units[channel] = time_units
            continue

        starts_before = sync.reference_frames
        output = sync.read_tick(byte)
        if sync.reference_frames != starts_before:
            close(run)
            run = _Run(offset // geometry.bytes_per_frame)
        if output is None or output.region is not Region.ACTIVE:
            continue
        if run.primed_at_start is None:
            run.primed_at_start = all(tag is not None for tag in output.row.channels)
        run.values.append(output.values)
    close(run)

    result.reference_frame_starts = sync.reference_frames
    logging.info(f"EventLoop: {result.event_count} events, {len(result.output_frames)} output frame(s), "
                 f"{result.violation_count} violation(s).")
    return result
