# =============================================================
# File: geometry.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-12
# Refactored: 2026-02-01
# Description:
#     Frame geometry of an 8-bit BT.656 stream: line and sample
#     counts, the field/blanking line map, the per-frame byte
#     template and the offset -> (frame, line, sample, region)
#     mapping used as provenance throughout the simulator.
# =============================================================

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import NamedTuple, Tuple

import numpy as np

from src.core.config import CHROMA_BLANK, GEOMETRY_PROFILES, LUMA_BLANK
from src.core.errors import GeometryError
from src.video.timing_codes import xy_byte

# Bytes of one timing reference code.
CODE_BYTES: int = 4


# =============================================================
# Byte regions
# =============================================================
class Region(str, Enum):
    """Role of a byte inside a line."""

    EAV = "eav"
    BLANKING = "blanking"
    SAV = "sav"
    ACTIVE = "active"


REGION_EAV, REGION_BLANKING, REGION_SAV, REGION_ACTIVE = 0, 1, 2, 3
REGION_BY_CODE: Tuple[Region, ...] = (Region.EAV, Region.BLANKING, Region.SAV, Region.ACTIVE)


class Location(NamedTuple):
    """Frame coordinates of one stream byte."""

    frame_index: int
    line: int
    sample: int
    region: Region


# =============================================================
# FrameGeometry Class
# =============================================================
@dataclass(frozen=True)
class FrameGeometry:
    """
    Line/sample layout of one digital video frame.

    ``sample`` coordinates used elsewhere are byte positions within a
    line: EAV occupies bytes 0..3, horizontal blanking follows, then SAV
    and finally the active (or vertical blanking) payload.

    Attributes:
        lines_total: Lines per frame.
        samples_total: Luma samples per line, blanking included.
        samples_active: Active luma samples per line (frame width).
        lines_active_per_field: Active lines per field (frame height / 2).
        interlaced: Two fields per frame when True, one otherwise.
        first_active_line: First active line of field 0 (1-based).
    """

    lines_total: int = 525
    samples_total: int = 858
    samples_active: int = 720
    lines_active_per_field: int = 240
    interlaced: bool = True
    first_active_line: int = 20

    def __post_init__(self) -> None:
        for name in ("lines_total", "samples_total", "samples_active", "lines_active_per_field", "first_active_line"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value <= 0:
                raise GeometryError(f"{name} must be a positive integer, got {value!r}")
        if self.samples_active >= self.samples_total:
            raise GeometryError("samples_active must be smaller than samples_total")
        if self.samples_active % 2:
            raise GeometryError("samples_active must be even for 4:2:2 data")
        if self.hblank_bytes < 0:
            raise GeometryError("line too short for EAV, SAV and active data")
        if 2 * self.lines_active_per_field > self.lines_total:
            raise GeometryError("2 x lines_active_per_field exceeds lines_total")
        if self.first_active_line < 2:
            raise GeometryError("first_active_line must leave at least one blanking line")
        for field in range(self.field_count):
            start = self.field_active_start(field)
            last = start + self.active_lines_per_field - 1
            if last > self.field_last_line(field):
                raise GeometryError(f"active lines of field {field} overflow the field ({start}..{last})")

    # =============================================================
    # Named profiles
    # =============================================================
    @classmethod
    def profile(cls, name: str) -> "FrameGeometry":
        """
        Returns a named geometry profile ("ntsc" or "desk").

        Raises:
            GeometryError: If the profile is unknown.
        """
        try:
            return cls(**GEOMETRY_PROFILES[name])
        except KeyError:
            raise GeometryError(f"unknown geometry profile '{name}'") from None

    # =============================================================
    # Derived sizes
    # =============================================================
    @property
    def bytes_per_line(self) -> int:
        return self.samples_total * 2

    @property
    def active_bytes_per_line(self) -> int:
        return self.samples_active * 2

    @property
    def hblank_bytes(self) -> int:
        return self.bytes_per_line - self.active_bytes_per_line - 2 * CODE_BYTES

    @property
    def sav_position(self) -> int:
        """Byte position of the SAV code's first byte within a line."""
        return CODE_BYTES + self.hblank_bytes

    @property
    def payload_position(self) -> int:
        """Byte position of the first active byte within a line."""
        return self.sav_position + CODE_BYTES

    @property
    def bytes_per_frame(self) -> int:
        return self.lines_total * self.bytes_per_line

    @property
    def width(self) -> int:
        return self.samples_active

    @property
    def height(self) -> int:
        return 2 * self.lines_active_per_field

    @property
    def active_bytes_per_frame(self) -> int:
        """Full 4:2:2 active payload of one frame (the FIFO capacity)."""
        return self.active_bytes_per_line * self.height

    # =============================================================
    # Line map
    # =============================================================
    @property
    def field_count(self) -> int:
        return 2 if self.interlaced else 1

    @property
    def active_lines_per_field(self) -> int:
        return self.lines_active_per_field if self.interlaced else self.height

    def field_first_line(self, field: int) -> int:
        if field == 0:
            return 1
        return self.lines_total // 2 + 1

    def field_last_line(self, field: int) -> int:
        if self.interlaced and field == 0:
            return self.lines_total // 2
        return self.lines_total

    def field_active_start(self, field: int) -> int:
        """First active line of ``field``; field 1 absorbs the odd extra line."""
        if field == 0:
            return self.first_active_line
        return self.first_active_line + self.lines_total // 2 + self.lines_total % 2

    def field_of_line(self, line: int) -> int:
        if not self.interlaced:
            return 0
        return 0 if line <= self.lines_total // 2 else 1

    def is_active_line(self, line: int) -> bool:
        start = self.field_active_start(self.field_of_line(line))
        return start <= line < start + self.active_lines_per_field

    def row_of_line(self, line: int) -> int:
        """Frame row carried by an active line, or -1 for a blanking line."""
        if not self.is_active_line(line):
            return -1
        field = self.field_of_line(line)
        index = line - self.field_active_start(field)
        return 2 * index + field if self.interlaced else index

    @property
    def frame_start_line(self) -> int:
        """Line whose SAV carries the V falling edge of field 0."""
        return self.first_active_line

    @property
    def frame_start_offset(self) -> int:
        """Offset, within a frame, of the XY byte that starts the frame."""
        return (self.frame_start_line - 1) * self.bytes_per_line + self.sav_position + CODE_BYTES - 1

    def layout(self) -> "GeometryLayout":
        """Returns the cached lookup tables for this geometry."""
        return _build_layout(self)


# =============================================================
# Precomputed layout tables
# =============================================================
@dataclass(frozen=True, eq=False)
class GeometryLayout:
    """
    Read-only lookup tables derived from a FrameGeometry.

    Attributes:
        line_field: Field bit per line (index = line - 1).
        line_active: Active flag per line.
        template: One encoded frame with blanking everywhere.
        region: Region code per byte offset within a frame.
        active_offsets: Frame offsets of active bytes, in stream order.
        active_line: Line (1-based) of each active byte.
        active_sample: Byte position within its line of each active byte.
        active_flat_index: Index into a RawFrame's flattened data.
        luma_mask: True where the active byte is a luma sample.
    """

    line_field: np.ndarray
    line_active: np.ndarray
    template: np.ndarray
    region: np.ndarray
    active_offsets: np.ndarray
    active_line: np.ndarray
    active_sample: np.ndarray
    active_flat_index: np.ndarray
    luma_mask: np.ndarray


@lru_cache(maxsize=16)
def _build_layout(geometry: FrameGeometry) -> GeometryLayout:
    lines = geometry.lines_total
    bpl = geometry.bytes_per_line
    line_numbers = np.arange(1, lines + 1)
    line_field = np.array([geometry.field_of_line(int(n)) for n in line_numbers], dtype=np.uint8)
    line_active = np.array([geometry.is_active_line(int(n)) for n in line_numbers], dtype=bool)
    line_row = np.array([geometry.row_of_line(int(n)) for n in line_numbers], dtype=np.int64)
    line_v = (~line_active).astype(np.uint8)

    # --- Byte template: blanking levels everywhere, codes at both ends of the blanking ---
    template = np.tile(np.array([CHROMA_BLANK, LUMA_BLANK], dtype=np.uint8), lines * bpl // 2).reshape(lines, bpl)
    sav = geometry.sav_position
    for position, h in ((0, 1), (sav, 0)):
        template[:, position] = 0xFF
        template[:, position + 1] = 0x00
        template[:, position + 2] = 0x00
        template[:, position + 3] = [xy_byte(int(f), int(v), h) for f, v in zip(line_field, line_v)]

    # --- Region per byte ---
    region_line = np.full(bpl, REGION_BLANKING, dtype=np.uint8)
    region_line[:CODE_BYTES] = REGION_EAV
    region_line[sav:sav + CODE_BYTES] = REGION_SAV
    region = np.tile(region_line, (lines, 1))
    payload = geometry.payload_position
    region[line_active, payload:] = REGION_ACTIVE

    # --- Active bytes in stream order ---
    active_lines = line_numbers[line_active]
    act = geometry.active_bytes_per_line
    columns = np.arange(act)
    active_offsets = ((active_lines - 1)[:, None] * bpl + payload + columns[None, :]).ravel()
    active_line = np.repeat(active_lines, act)
    active_sample = np.tile(payload + columns, len(active_lines))
    rows = line_row[line_active]
    active_flat_index = (rows[:, None] * act + columns[None, :]).ravel()
    luma_mask = np.tile(columns % 2 == 1, len(active_lines))

    tables = GeometryLayout(
        line_field=line_field,
        line_active=line_active,
        template=template.ravel(),
        region=region.ravel(),
        active_offsets=active_offsets.astype(np.int64),
        active_line=active_line.astype(np.int32),
        active_sample=active_sample.astype(np.int32),
        active_flat_index=active_flat_index.astype(np.int64),
        luma_mask=luma_mask,
    )
    for array in vars(tables).values():
        array.setflags(write=False)
    logging.debug(f"GeometryLayout: built tables for {geometry} ({geometry.bytes_per_frame} bytes/frame).")
    return tables


# =============================================================
# Offset -> coordinates
# =============================================================
def locate(geometry: FrameGeometry, byte_offset: int) -> Location:
    """
    Maps a stream offset to its frame coordinates.

    Args:
        geometry: The stream geometry; offset 0 is the first EAV of frame 0.
        byte_offset: Non-negative stream offset.

    Returns:
        (frame_index, line, sample, region) with 1-based lines.
    """
    if byte_offset < 0:
        raise ValueError(f"byte_offset must be non-negative, got {byte_offset}")
    frame_index, within = divmod(int(byte_offset), geometry.bytes_per_frame)
    line_index, sample = divmod(within, geometry.bytes_per_line)
    code = int(geometry.layout().region[within])
    return Location(frame_index, line_index + 1, sample, REGION_BY_CODE[code])


def locate_array(geometry: FrameGeometry, offsets: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorized ``locate``.

    Returns:
        Arrays (frame_index, line, sample, region_code).
    """
    offsets = np.asarray(offsets, dtype=np.int64)
    frame_index, within = np.divmod(offsets, geometry.bytes_per_frame)
    line_index, sample = np.divmod(within, geometry.bytes_per_line)
    return frame_index, line_index + 1, sample, geometry.layout().region[within]


def active_count_before(geometry: FrameGeometry, offsets: np.ndarray) -> np.ndarray:
    """
    Number of active bytes at stream offsets strictly below each offset.

    Args:
        geometry: Stream geometry.
        offsets: Stream offsets (array-like).

    Returns:
        int64 counts.
    """
    offsets = np.asarray(offsets, dtype=np.int64)
    frames, within = np.divmod(offsets, geometry.bytes_per_frame)
    in_frame = np.searchsorted(geometry.layout().active_offsets, within, side="left")
    return frames * geometry.active_bytes_per_frame + in_frame


def active_offset(geometry: FrameGeometry, active_index: np.ndarray) -> np.ndarray:
    """Stream offset of the ``active_index``-th active byte (vectorized)."""
    active_index = np.asarray(active_index, dtype=np.int64)
    frames, slot = np.divmod(active_index, geometry.active_bytes_per_frame)
    return frames * geometry.bytes_per_frame + geometry.layout().active_offsets[slot]
