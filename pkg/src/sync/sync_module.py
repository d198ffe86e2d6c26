# =============================================================
# File: sync_module.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-20
# Refactored: 2026-02-03
# Description:
#     The K-channel synchronization module. Every non-reference
#     channel is written into its own one-frame circular FIFO at its
#     own clock; all FIFOs are read together at the reference clock,
#     so co-located pixels of all channels leave at the same tick.
# =============================================================

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from src.clocks.measurement import ClockStats
from src.clocks.source import TimedByte
from src.core.config import DEFAULT_FILL_BYTE
from src.core.errors import ConfigError
from src.sync.fifo import CircularFifo, Tag
from src.sync.fsd import FsdState, feed_byte
from src.sync.trace import AlignmentTrace, TraceRow, is_violation
from src.video.geometry import FrameGeometry, Region

_FIXED_PATTERN = re.compile(r"^fixed\((\d+)\)$")


# =============================================================
# Reference selection
# =============================================================
@dataclass(frozen=True)
class ReferencePolicy:
    """
    How the reference channel is chosen.

    Attributes:
        kind: "fixed" or "slowest_clock".
        index: Channel for "fixed".
    """

    kind: str = "fixed"
    index: int = 0

    @classmethod
    def parse(cls, text: str, field: str = "reference") -> "ReferencePolicy":
        """
        Parses "fixed(i)", "fixed" (channel 0) or "slowest_clock".

        Raises:
            ConfigError: On any other text.
        """
        text = str(text).strip()
        if text == "slowest_clock":
            return cls("slowest_clock")
        if text == "fixed":
            return cls("fixed", 0)
        match = _FIXED_PATTERN.match(text)
        if match:
            return cls("fixed", int(match.group(1)))
        raise ConfigError(field, f"unknown reference policy '{text}' (use fixed(<index>) or slowest_clock)")

    def __str__(self) -> str:
        return f"fixed({self.index})" if self.kind == "fixed" else self.kind


def select_reference(policy: ReferencePolicy, clocks: Sequence[ClockStats]) -> int:
    """
    Picks the reference channel.

    Args:
        policy: Selection policy.
        clocks: Measured statistics of every channel, in channel order.

    Returns:
        The channel index; ``slowest_clock`` takes the lowest mean
        frequency and breaks ties towards the lower index.

    Raises:
        ConfigError: If there are no channels or a fixed index is out of range.
    """
    if not clocks:
        raise ConfigError("sources", "at least one channel is required")
    if policy.kind == "fixed":
        if not 0 <= policy.index < len(clocks):
            raise ConfigError("reference", f"fixed({policy.index}) is out of range for {len(clocks)} channel(s)")
        return policy.index
    if policy.kind == "slowest_clock":
        means = [stats.mean_hz for stats in clocks]
        return means.index(min(means))
    raise ConfigError("reference", f"unknown reference policy '{policy.kind}'")


# =============================================================
# SyncModule Class
# =============================================================
@dataclass(frozen=True)
class SyncOutput:
    """
    Output of one read tick.

    Attributes:
        time_units: Reference edge time.
        values: One byte per channel, in channel order.
        region: Region of the reference byte.
        address: FIFO read address (None on blanking ticks).
        row: Alignment row (None on blanking ticks).
    """

    time_units: int
    values: Tuple[int, ...]
    region: Region
    address: Optional[int] = None
    row: Optional[TraceRow] = None


class SyncModule:
    """
    K-channel synchronizer driven one byte at a time.

    Writes must be delivered in each channel's stream order and
    interleaved with reads in global time order (writes first on ties).
    """

    def __init__(self, channel_count: int, reference_channel: int, geometry: FrameGeometry,
                 fill_byte: int = DEFAULT_FILL_BYTE, keep_trace: bool = False) -> None:
        """
        Initializes idle FIFOs and detectors.

        Args:
            channel_count: K (>= 1).
            reference_channel: Index of the reference channel.
            geometry: Shared frame geometry; the FIFO holds one frame of active data.
            fill_byte: Emitted for channels that are not primed yet.
            keep_trace: Keep every TraceRow (not only the statistics).
        """
        if channel_count < 1:
            raise ConfigError("sources", "at least one channel is required")
        if not 0 <= reference_channel < channel_count:
            raise ConfigError("reference", f"channel {reference_channel} does not exist")
        self.channel_count = channel_count
        self.reference_channel = reference_channel
        self.geometry = geometry
        self.fill_byte = fill_byte
        self.fifos: Dict[int, CircularFifo] = {
            channel: CircularFifo(geometry.active_bytes_per_frame, channel)
            for channel in range(channel_count)
            if channel != reference_channel
        }
        self.detectors: List[FsdState] = [FsdState() for _ in range(channel_count)]
        self.read_enabled = False
        self.reference_frames = 0
        self.trace = AlignmentTrace(channel_count, reference_channel, keep_rows=keep_trace)
        logging.info(f"SyncModule: {channel_count} channel(s), reference {reference_channel}, "
                     f"FIFO capacity {geometry.active_bytes_per_frame} bytes.")

    @property
    def all_primed(self) -> bool:
        return all(fifo.primed for fifo in self.fifos.values())

    def primed(self, channel: int) -> bool:
        if channel == self.reference_channel:
            return True
        return self.fifos[channel].primed

    # =============================================================
    # Ticks
    # =============================================================
    def write_tick(self, channel: int, byte: TimedByte) -> None:
        """
        Consumes one byte of a non-reference channel.

        The channel's detector sees every byte; a field-0 start pulls the
        write pointer back to 0 and enables writing. Only active bytes are
        stored.
        """
        if channel == self.reference_channel:
            raise ValueError("write_tick called for the reference channel")
        fifo = self.fifos[channel]
        event = feed_byte(self.detectors[channel], byte.value)
        if event is not None and event.f_bit == 0:
            fifo.restart_write()
        if byte.provenance.region is Region.ACTIVE:
            source = byte.provenance
            fifo.write(byte.value, (source.frame_index, source.line, source.sample))

    def read_tick(self, ref_byte: TimedByte) -> Optional[SyncOutput]:
        """
        Consumes one reference byte.

        Returns:
            None until the first reference frame start; then K bytes per
            tick. Active ticks read every FIFO, blanking ticks repeat the
            reference byte without touching the FIFOs.
        """
        event = feed_byte(self.detectors[self.reference_channel], ref_byte.value)
        if event is not None and event.f_bit == 0:
            for fifo in self.fifos.values():
                fifo.restart_read()
            if not self.read_enabled:
                logging.info(f"SyncModule: first reference frame start at byte {event.byte_offset}.")
            self.read_enabled = True
            self.reference_frames += 1
        if not self.read_enabled:
            return None

        time_units = ref_byte.time.units
        source = ref_byte.provenance
        if source.region is not Region.ACTIVE:
            return SyncOutput(time_units, (ref_byte.value,) * self.channel_count, source.region)

        reference_tag: Tag = (source.frame_index, source.line, source.sample)
        values: List[int] = []
        tags: List[Optional[Tag]] = []
        address = None
        for channel in range(self.channel_count):
            if channel == self.reference_channel:
                values.append(ref_byte.value)
                tags.append(reference_tag)
                continue
            address, value, tag = self.fifos[channel].read()
            values.append(value if tag is not None else self.fill_byte)
            tags.append(tag)
        row = TraceRow(time_units, reference_tag, tuple(tags), is_violation(reference_tag, tags))
        self.trace.add_row(row)
        return SyncOutput(time_units, tuple(values), source.region, address, row)
