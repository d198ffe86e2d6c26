# =============================================================
# File: timing_codes.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-12
# Description:
#     BT.656 timing reference codes (EAV/SAV). The fourth byte of
#     every FF 00 00 XY code packs the F, V and H flags plus four
#     XOR protection bits.
# =============================================================

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.core.errors import CorruptedCodeError, NotACodeError


def protection_bits(f: int, v: int, h: int) -> Tuple[int, int, int, int]:
    """Returns (P3, P2, P1, P0) for the given flags."""
    return (v ^ h, f ^ h, f ^ v, f ^ v ^ h)


def xy_byte(f: int, v: int, h: int) -> int:
    """
    Packs the XY byte ``1 F V H P3 P2 P1 P0`` (MSB first).

    Args:
        f: Field bit.
        v: Vertical blanking bit.
        h: 0 for SAV, 1 for EAV.

    Returns:
        The XY byte value.
    """
    f, v, h = f & 1, v & 1, h & 1
    p3, p2, p1, p0 = protection_bits(f, v, h)
    return 0x80 | (f << 6) | (v << 5) | (h << 4) | (p3 << 3) | (p2 << 2) | (p1 << 1) | p0


# =============================================================
# TimingRefCode Class
# =============================================================
@dataclass(frozen=True)
class TimingRefCode:
    """A validated timing reference code."""

    f: int
    v: int
    h: int

    @property
    def protection(self) -> int:
        """The four protection bits P3..P0 as an integer."""
        p3, p2, p1, p0 = protection_bits(self.f, self.v, self.h)
        return (p3 << 3) | (p2 << 2) | (p1 << 1) | p0

    @property
    def is_sav(self) -> bool:
        return self.h == 0

    @property
    def is_eav(self) -> bool:
        return self.h == 1

    def to_byte(self) -> int:
        """Serializes the XY byte."""
        return xy_byte(self.f, self.v, self.h)

    def to_bytes(self) -> bytes:
        """Serializes the full four-byte code."""
        return bytes((0xFF, 0x00, 0x00, self.to_byte()))


def parse_xy(byte: int) -> TimingRefCode:
    """
    Parses and validates an XY byte.

    Args:
        byte: The fourth byte of an FF 00 00 XY sequence.

    Returns:
        The decoded TimingRefCode.

    Raises:
        NotACodeError: If bit 7 is clear.
        CorruptedCodeError: If the protection bits disagree with F, V, H.
    """
    byte = int(byte) & 0xFF
    if not byte & 0x80:
        raise NotACodeError(byte)
    f, v, h = (byte >> 6) & 1, (byte >> 5) & 1, (byte >> 4) & 1
    expected = xy_byte(f, v, h)
    if expected != byte:
        raise CorruptedCodeError(expected, byte)
    return TimingRefCode(f, v, h)


# =============================================================
# Lookup tables for the vectorized scanners
# =============================================================
XY_VALID: np.ndarray = np.zeros(256, dtype=bool)
XY_F: np.ndarray = np.zeros(256, dtype=np.uint8)
XY_V: np.ndarray = np.zeros(256, dtype=np.uint8)
XY_H: np.ndarray = np.zeros(256, dtype=np.uint8)

for _f in (0, 1):
    for _v in (0, 1):
        for _h in (0, 1):
            _xy = xy_byte(_f, _v, _h)
            XY_VALID[_xy] = True
            XY_F[_xy], XY_V[_xy], XY_H[_xy] = _f, _v, _h

for _lut in (XY_VALID, XY_F, XY_V, XY_H):
    _lut.setflags(write=False)
