# =============================================================
# File: codec.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-14
# Refactored: 2026-02-02
# Description:
#     Bit-exact BT.656 encoder and a total (never raising) decoder.
#     The encoder fills a cached per-geometry template with active
#     data; the decoder scans for FF 00 00 XY codes, reports bad
#     codes as warnings and reassembles frames from the line map.
# =============================================================

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.errors import GeometryError
from src.video.frame import RawFrame, default_parity
from src.video.geometry import CODE_BYTES, FrameGeometry
from src.video.timing_codes import TimingRefCode, XY_F, XY_H, XY_V, XY_VALID, xy_byte

ByteSource = Union[bytes, bytearray, memoryview, np.ndarray]


# =============================================================
# Encoding
# =============================================================
def _check_dimensions(frame: RawFrame, geometry: FrameGeometry) -> None:
    if frame.width != geometry.width or frame.height != geometry.height:
        raise GeometryError(
            f"frame is {frame.width}x{frame.height}, geometry expects {geometry.width}x{geometry.height}"
        )
    # The line map fixes which field each row travels in; other parities cannot be encoded.
    if not np.array_equal(frame.field_parity, default_parity(geometry.height, geometry.interlaced)):
        raise GeometryError("frame field parity does not match the geometry's field layout")


def encode_frame_array(frame: RawFrame, geometry: FrameGeometry) -> np.ndarray:
    """Encodes one frame into a new uint8 array of ``geometry.bytes_per_frame`` bytes."""
    _check_dimensions(frame, geometry)
    layout = geometry.layout()
    encoded = layout.template.copy()
    encoded[layout.active_offsets] = frame.data.ravel()[layout.active_flat_index]
    return encoded


def encode_frame(frame: RawFrame, geometry: FrameGeometry) -> bytes:
    """
    Encodes one RawFrame as a BT.656 byte sequence.

    Args:
        frame: The frame to encode; its size must match the geometry's active area.
        geometry: Target stream geometry.

    Returns:
        ``geometry.bytes_per_frame`` bytes (900,900 for the default geometry).

    Raises:
        GeometryError: If the frame dimensions do not match.
    """
    return encode_frame_array(frame, geometry).tobytes()


def encode_frames(frames: Sequence[RawFrame], geometry: FrameGeometry) -> np.ndarray:
    """Encodes consecutive frames into one contiguous uint8 stream."""
    stream = np.empty(len(frames) * geometry.bytes_per_frame, dtype=np.uint8)
    for index, frame in enumerate(frames):
        start = index * geometry.bytes_per_frame
        stream[start:start + geometry.bytes_per_frame] = encode_frame_array(frame, geometry)
    return stream


def active_to_frame(active: np.ndarray, geometry: FrameGeometry) -> RawFrame:
    """
    Rebuilds a RawFrame from one frame of active bytes in stream order.

    Args:
        active: ``geometry.active_bytes_per_frame`` bytes as read from a FIFO.
        geometry: Stream geometry.
    """
    layout = geometry.layout()
    flat = np.empty(geometry.active_bytes_per_frame, dtype=np.uint8)
    flat[layout.active_flat_index] = active
    data = flat.reshape(geometry.height, geometry.active_bytes_per_line)
    return RawFrame(data, field_parity=default_parity(geometry.height, geometry.interlaced))


# =============================================================
# Decoding results
# =============================================================
@dataclass(frozen=True)
class CodeEvent:
    """A valid timing reference code found at ``offset`` (position of the FF byte)."""

    offset: int
    code: TimingRefCode


@dataclass(frozen=True)
class ActiveSample:
    """One active data byte with its coordinates."""

    offset: int
    frame_index: int
    line: int
    sample: int
    value: int


@dataclass(frozen=True)
class DecodeWarning:
    """A recoverable decoding problem."""

    offset: int
    message: str
    expected: Optional[int] = None
    found: Optional[int] = None


@dataclass(frozen=True)
class ActiveLine:
    """An active line located by the decoder."""

    offset: int
    line: int
    field: int
    frame_index: int
    row: int


@dataclass(frozen=True)
class DecodedFrame:
    """A reassembled frame; ``complete`` is False when rows are missing."""

    frame: RawFrame
    complete: bool
    start_offset: int
    rows_present: int


@dataclass
class DecodeResult:
    """
    Output of ``decode_stream``.

    Attributes:
        codes: Valid timing codes in stream order.
        warnings: Corrupted codes and truncation notes.
        frames: Reassembled frames (complete and trailing partial ones).
        active_lines: Every active line attributed to a frame.
    """

    codes: List[CodeEvent] = field(default_factory=list)
    warnings: List[DecodeWarning] = field(default_factory=list)
    frames: List[DecodedFrame] = field(default_factory=list)
    active_lines: List[ActiveLine] = field(default_factory=list)
    buffer: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint8), repr=False)
    active_bytes_per_line: int = 0
    payload_position: int = 0

    @property
    def complete_frames(self) -> List[RawFrame]:
        return [decoded.frame for decoded in self.frames if decoded.complete]

    def iter_events(self) -> Iterator[Union[CodeEvent, ActiveSample]]:
        """Yields codes and active samples in stream order."""
        codes = iter(self.codes)
        pending = next(codes, None)
        for active_line in self.active_lines:
            first = active_line.offset + self.payload_position
            while pending is not None and pending.offset < first:
                yield pending
                pending = next(codes, None)
            last = min(first + self.active_bytes_per_line, len(self.buffer))
            for offset in range(first, last):
                yield ActiveSample(offset, active_line.frame_index, active_line.line,
                                   offset - active_line.offset, int(self.buffer[offset]))
        while pending is not None:
            yield pending
            pending = next(codes, None)


# =============================================================
# Code scanning
# =============================================================
def as_buffer(data: ByteSource) -> np.ndarray:
    """Views bytes-like input as a read-only uint8 array without copying."""
    if isinstance(data, np.ndarray):
        return data.astype(np.uint8, copy=False).ravel()
    return np.frombuffer(bytes(data) if isinstance(data, memoryview) else data, dtype=np.uint8)


def prefix_candidates(buffer: np.ndarray) -> np.ndarray:
    """Offsets i where FF 00 00 starts and an XY byte exists at i + 3."""
    if len(buffer) < CODE_BYTES:
        return np.zeros(0, dtype=np.int64)
    hits = (buffer[:-3] == 0xFF) & (buffer[1:-2] == 0x00) & (buffer[2:-1] == 0x00)
    return np.flatnonzero(hits).astype(np.int64)


def scan_timing_codes(data: ByteSource) -> Tuple[List[CodeEvent], List[DecodeWarning]]:
    """
    Finds every timing reference code in a buffer.

    A byte consumed as an XY byte cannot start another prefix, which is
    how a byte-at-a-time matcher behaves.

    Returns:
        (valid codes, warnings for rejected XY bytes)
    """
    buffer = as_buffer(data)
    codes: List[CodeEvent] = []
    warnings: List[DecodeWarning] = []
    next_free = 0
    for offset in prefix_candidates(buffer).tolist():
        if offset < next_free:
            continue
        next_free = offset + CODE_BYTES
        xy = int(buffer[offset + 3])
        if XY_VALID[xy]:
            codes.append(CodeEvent(offset, TimingRefCode(int(XY_F[xy]), int(XY_V[xy]), int(XY_H[xy]))))
        elif not xy & 0x80:
            warnings.append(DecodeWarning(offset + 3, "not a timing code (bit 7 clear)", found=xy))
        else:
            expected = xy_byte((xy >> 6) & 1, (xy >> 5) & 1, (xy >> 4) & 1)
            warnings.append(DecodeWarning(offset + 3, "corrupted protection bits", expected=expected, found=xy))
    return codes, warnings


# =============================================================
# Frame reassembly
# =============================================================
class _FrameBuilder:
    """Collects active lines of one frame."""

    def __init__(self, geometry: FrameGeometry, start_offset: int) -> None:
        self.geometry = geometry
        self.start_offset = start_offset
        self.data = np.zeros((geometry.height, geometry.active_bytes_per_line), dtype=np.uint8)
        self.parity = default_parity(geometry.height, geometry.interlaced).copy()
        self.filled = np.zeros(geometry.height, dtype=bool)
        self.truncated = False
        self.cursor = [0, 0]

    def row_for(self, field_bit: int) -> int:
        index = self.cursor[field_bit]
        self.cursor[field_bit] += 1
        if self.geometry.interlaced:
            return 2 * index + field_bit
        return index

    def place(self, row: int, field_bit: int, payload: np.ndarray) -> None:
        self.data[row, :len(payload)] = payload
        self.parity[row] = field_bit
        if len(payload) < self.geometry.active_bytes_per_line:
            self.truncated = True
        else:
            self.filled[row] = True

    @property
    def complete(self) -> bool:
        return bool(self.filled.all()) and not self.truncated

    def build(self) -> DecodedFrame:
        return DecodedFrame(
            frame=RawFrame(self.data, field_parity=self.parity),
            complete=self.complete,
            start_offset=self.start_offset,
            rows_present=int(self.filled.sum()),
        )


def decode_stream(data: ByteSource, geometry: Optional[FrameGeometry] = None) -> DecodeResult:
    """
    Decodes a BT.656 byte stream.

    Lines are located from either of their timing codes, so a single
    corrupted code loses nothing. A frame starts on a line whose V bit
    falls from 1 to 0 with F = 0; field 1 rows start on the matching
    F = 1 transition.

    Args:
        data: Arbitrary bytes.
        geometry: Expected geometry (defaults to the NTSC-like profile).

    Returns:
        A DecodeResult; corruption is reported in ``warnings``.
    """
    geometry = geometry or FrameGeometry()
    buffer = as_buffer(data)
    codes, warnings = scan_timing_codes(buffer)
    result = DecodeResult(
        codes=codes,
        warnings=warnings,
        buffer=buffer,
        active_bytes_per_line=geometry.active_bytes_per_line,
        payload_position=geometry.payload_position,
    )

    # --- One record per line, keyed by the line's first byte ---
    lines: dict = {}
    for event in codes:
        start = event.offset if event.code.is_eav else event.offset - geometry.sav_position
        if start < 0:
            continue
        if start not in lines or event.code.is_sav:
            lines[start] = (event.code.f, event.code.v)

    builder: Optional[_FrameBuilder] = None
    previous_v: Optional[int] = None
    anchor = 0
    frame_index = -1
    for start in sorted(lines):
        f_bit, v_bit = lines[start]
        falling = previous_v == 1 and v_bit == 0
        previous_v = v_bit
        if falling and f_bit == 0:
            if builder is not None:
                result.frames.append(builder.build())
            builder = _FrameBuilder(geometry, start)
            anchor = start
            frame_index += 1
        elif falling and builder is not None:
            builder.cursor[f_bit] = 0
        if v_bit or builder is None:
            continue

        row = builder.row_for(f_bit)
        if row >= geometry.height:
            continue
        line_number = (geometry.frame_start_line - 1 + (start - anchor) // geometry.bytes_per_line) % geometry.lines_total + 1
        first = start + geometry.payload_position
        payload = buffer[first:first + geometry.active_bytes_per_line]
        builder.place(row, f_bit, payload)
        result.active_lines.append(ActiveLine(start, line_number, f_bit, frame_index, row))
        if len(payload) < geometry.active_bytes_per_line:
            result.warnings.append(DecodeWarning(first + len(payload), "stream ends inside an active line"))
        if builder.complete:
            result.frames.append(builder.build())
            builder = None

    if builder is not None and builder.filled.any() or builder is not None and builder.truncated:
        result.frames.append(builder.build())

    if result.warnings:
        logging.warning(f"Decoder: {len(result.warnings)} warning(s) while decoding {len(buffer)} bytes.")
    logging.debug(f"Decoder: {len(codes)} codes, {len(result.frames)} frames.")
    return result
