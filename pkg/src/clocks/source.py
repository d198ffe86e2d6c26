# =============================================================
# File: source.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-17
# Refactored: 2026-02-02
# Description:
#     Timed source streams: the BT.656 bytes of one video source,
#     each emitted on one edge of the source's clock and tagged
#     with its provenance. Streams are stored as a byte buffer plus
#     the clock; TimedBytes are materialised only on demand.
# =============================================================

import logging
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Optional

import numpy as np

from src.clocks.clock_model import ClockModel
from src.core.sim_time import SimTime
from src.video.codec import encode_frames
from src.video.frame import RawFrame
from src.video.geometry import FrameGeometry, Region, locate

# frame_index -> RawFrame
FrameSource = Callable[[int], RawFrame]


class Provenance(NamedTuple):
    """Where a stream byte came from."""

    source_id: str
    frame_index: int
    line: int
    sample: int
    region: Region


@dataclass(frozen=True)
class TimedByte:
    """One stream byte with its exact emission time."""

    time: SimTime
    value: int
    provenance: Provenance


# =============================================================
# TimedStream Class
# =============================================================
@dataclass(frozen=True, eq=False)
class TimedStream:
    """
    A byte stream clocked by one ClockModel.

    Byte ``n`` is emitted on clock edge ``n + edge_offset``.

    Attributes:
        source_id: Name used in provenance tags and reports.
        model: The emitting clock.
        geometry: Stream geometry (for provenance).
        data: Read-only uint8 stream bytes.
        edge_offset: Clock edge of byte 0 (non-zero for re-timed output).
    """

    source_id: str
    model: ClockModel
    geometry: FrameGeometry
    data: np.ndarray
    edge_offset: int = 0

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=np.uint8)
        if data.flags.writeable:
            data = data.copy()
            data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def __len__(self) -> int:
        return len(self.data)

    @property
    def frame_count(self) -> int:
        """Complete frames in the stream."""
        return len(self.data) // self.geometry.bytes_per_frame

    def time_units(self, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
        """Phase-grid emission times of bytes ``start..stop-1``."""
        stop = len(self.data) if stop is None else min(stop, len(self.data))
        return self.model.edge_units(np.arange(start, max(start, stop), dtype=np.int64) + self.edge_offset)

    def provenance(self, offset: int) -> Provenance:
        frame_index, line, sample, region = locate(self.geometry, offset)
        return Provenance(self.source_id, frame_index, line, sample, region)

    def __getitem__(self, offset: int) -> TimedByte:
        if not 0 <= offset < len(self.data):
            raise IndexError(f"offset {offset} outside a {len(self.data)}-byte stream")
        return TimedByte(self.model.next_edge(offset + self.edge_offset), int(self.data[offset]), self.provenance(offset))

    def __iter__(self) -> Iterator[TimedByte]:
        for offset in range(len(self.data)):
            yield self[offset]

    @property
    def first_time(self) -> SimTime:
        return self.model.next_edge(self.edge_offset)

    @property
    def end_units(self) -> int:
        """Time of the last byte (phase units); the edge of byte 0 for an empty stream."""
        if not len(self.data):
            return self.model.edge_unit(self.edge_offset)
        return self.model.edge_unit(len(self.data) - 1 + self.edge_offset)


# =============================================================
# Generation
# =============================================================
def derive_seed(seed: int, source_index: int, purpose: int) -> int:
    """
    Stable per-source seed derived from one scenario seed.

    Args:
        seed: Scenario seed.
        source_index: Position of the source in the scenario.
        purpose: One of the SEED_PURPOSE_* constants.
    """
    sequence = np.random.SeedSequence([int(seed), int(source_index), int(purpose)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def generate_source(source_id: str, model: ClockModel, geometry: FrameGeometry, content: FrameSource,
                    frame_count: int) -> TimedStream:
    """
    Encodes ``frame_count`` frames and clocks them out on ``model``.

    Args:
        source_id: Stream name.
        model: Emitting clock; the first byte fires at its startup delay.
        geometry: Frame geometry.
        content: Produces the RawFrame for a frame index.
        frame_count: Number of frames (>= 1).

    Returns:
        A TimedStream of ``frame_count * geometry.bytes_per_frame`` bytes.
    """
    if frame_count < 1:
        raise ValueError(f"frame_count must be at least 1, got {frame_count}")
    frames = [content(index) for index in range(frame_count)]
    stream = TimedStream(source_id, model, geometry, encode_frames(frames, geometry))
    logging.info(f"Source '{source_id}': {frame_count} frame(s), {len(stream)} bytes, first byte at {stream.first_time}.")
    return stream


def stream_from_dump(source_id: str, model: ClockModel, geometry: FrameGeometry, data: np.ndarray) -> TimedStream:
    """Clocks out a pre-recorded stream dump."""
    stream = TimedStream(source_id, model, geometry, data)
    if len(stream) % geometry.bytes_per_frame:
        logging.warning(f"Source '{source_id}': dump length {len(stream)} is not a whole number of frames.")
    return stream
