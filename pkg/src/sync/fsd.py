# =============================================================
# File: fsd.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-18
# Refactored: 2026-01-30
# Description:
#     Frame start detector. A byte-at-a-time state machine matches
#     FF 00 00 XY prefixes, extracts the V bit of SAV codes and
#     reports a field start on every 1 -> 0 transition of V.
# =============================================================

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence

from src.core.errors import TimingCodeError
from src.video.codec import ByteSource, as_buffer, prefix_candidates
from src.video.geometry import CODE_BYTES
from src.video.timing_codes import XY_F, XY_H, XY_V, XY_VALID, parse_xy


class FsdPhase(Enum):
    """Prefix-matching phase."""

    SEEK_FF = "seek_ff"
    SEEK_00A = "seek_00a"
    SEEK_00B = "seek_00b"
    READ_XY = "read_xy"


@dataclass
class FsdState:
    """
    Mutable detector state; one per stream.

    Attributes:
        phase: Where the matcher is inside an FF 00 00 XY prefix.
        last_v: V bit of the previous valid SAV, or None before the first one.
        bytes_consumed: Bytes fed so far (the offset of the next byte).
    """

    phase: FsdPhase = FsdPhase.SEEK_FF
    last_v: Optional[int] = None
    bytes_consumed: int = 0


@dataclass(frozen=True)
class FieldStartEvent:
    """A V falling edge; ``byte_offset`` is the XY byte of the SAV code."""

    byte_offset: int
    f_bit: int


# =============================================================
# Streaming detector
# =============================================================
def feed_byte(state: FsdState, byte: int) -> Optional[FieldStartEvent]:
    """
    Advances the detector by one byte.

    Args:
        state: Detector state (updated in place).
        byte: Next stream byte.

    Returns:
        A FieldStartEvent when this byte completes an SAV code whose V bit
        fell from 1 to 0, otherwise None.
    """
    offset = state.bytes_consumed
    state.bytes_consumed += 1
    phase = state.phase

    if phase is FsdPhase.READ_XY:
        state.phase = FsdPhase.SEEK_FF
        try:
            code = parse_xy(byte)
        except TimingCodeError:
            return None
        if code.is_eav:
            return None
        previous, state.last_v = state.last_v, code.v
        if previous == 1 and code.v == 0:
            return FieldStartEvent(offset, code.f)
        return None

    if byte == 0xFF:
        state.phase = FsdPhase.SEEK_00A
    elif byte == 0x00 and phase is FsdPhase.SEEK_00A:
        state.phase = FsdPhase.SEEK_00B
    elif byte == 0x00 and phase is FsdPhase.SEEK_00B:
        state.phase = FsdPhase.READ_XY
    else:
        state.phase = FsdPhase.SEEK_FF
    return None


def frame_starts(events: Iterable[FieldStartEvent]) -> List[FieldStartEvent]:
    """Keeps the field starts of field 0; each one starts a frame."""
    return [event for event in events if event.f_bit == 0]


def reset(state: Optional[FsdState] = None) -> FsdState:
    """Returns a pristine detector state."""
    return FsdState()


# =============================================================
# FrameStartDetector Class
# =============================================================
class FrameStartDetector:
    """Convenience wrapper that feeds whole chunks through ``feed_byte``."""

    def __init__(self) -> None:
        self.state: FsdState = FsdState()
        self.events: List[FieldStartEvent] = []

    def feed(self, chunk: Sequence[int]) -> List[FieldStartEvent]:
        """
        Feeds a chunk of bytes.

        Args:
            chunk: Bytes (or ints) continuing the stream.

        Returns:
            Events raised by this chunk, with stream-absolute offsets.
        """
        found = []
        for byte in bytes(chunk):
            event = feed_byte(self.state, byte)
            if event is not None:
                found.append(event)
        self.events.extend(found)
        return found

    def reset(self) -> None:
        self.state = reset(self.state)
        self.events = []

    @property
    def frame_starts(self) -> List[FieldStartEvent]:
        return frame_starts(self.events)


# =============================================================
# Whole-buffer scan
# =============================================================
def scan_field_starts(data: ByteSource) -> List[FieldStartEvent]:
    """
    Finds every field start in a complete buffer.

    Produces the same events as feeding the buffer through ``feed_byte``
    from a fresh state, but locates prefixes with numpy.
    """
    buffer = as_buffer(data)
    events: List[FieldStartEvent] = []
    last_v: Optional[int] = None
    next_free = 0
    for offset in prefix_candidates(buffer).tolist():
        if offset < next_free:
            continue
        next_free = offset + CODE_BYTES
        xy = int(buffer[offset + 3])
        if not XY_VALID[xy] or XY_H[xy]:
            continue
        v = int(XY_V[xy])
        if last_v == 1 and v == 0:
            events.append(FieldStartEvent(offset + 3, int(XY_F[xy])))
        last_v = v
    logging.debug(f"FSD: {len(events)} field start(s) in {len(buffer)} bytes.")
    return events
