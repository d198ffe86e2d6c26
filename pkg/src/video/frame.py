# =============================================================
# File: frame.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-13
# Description:
#     RawFrame: one frame of 4:2:2 YCbCr pixel data (byte order
#     Cb Y Cr Y per pixel pair) with a field parity per row.
#     Data is clamped to [0x01, 0xFE] here and nowhere else.
# =============================================================

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.config import CHROMA_BLANK, DATA_MAX, DATA_MIN, LUMA_BLANK
from src.core.errors import GeometryError


# =============================================================
# RawFrame Class
# =============================================================
@dataclass(frozen=True, eq=False)
class RawFrame:
    """
    Immutable 4:2:2 frame.

    Attributes:
        data: uint8 array of shape (height, 2 * width), Cb Y Cr Y order.
        field_parity: uint8 array of shape (height,), the F bit of each row.
    """

    data: np.ndarray
    field_parity: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        data = np.asarray(self.data)
        if data.ndim != 2 or data.shape[1] % 4:
            raise GeometryError(f"frame data must be (height, 2*width) with an even width, got {data.shape}")
        clamped = np.clip(data, DATA_MIN, DATA_MAX).astype(np.uint8)
        clamped.setflags(write=False)
        object.__setattr__(self, "data", clamped)

        if self.field_parity is None:
            parity = np.arange(clamped.shape[0], dtype=np.uint8) % 2
        else:
            parity = np.asarray(self.field_parity, dtype=np.uint8).copy()
            if parity.shape != (clamped.shape[0],):
                raise GeometryError("field_parity must have one entry per row")
        parity.setflags(write=False)
        object.__setattr__(self, "field_parity", parity)

    # =============================================================
    # Constructors
    # =============================================================
    @classmethod
    def blank(cls, width: int, height: int, interlaced: bool = True) -> "RawFrame":
        """A black frame at blanking levels."""
        row = np.tile(np.array([CHROMA_BLANK, LUMA_BLANK], dtype=np.uint8), width)
        return cls(np.tile(row, (height, 1)), field_parity=default_parity(height, interlaced))

    @classmethod
    def from_planes(cls, luma: np.ndarray, cb: np.ndarray, cr: np.ndarray, interlaced: bool = True) -> "RawFrame":
        """
        Interleaves separate planes into Cb Y Cr Y order.

        Args:
            luma: (height, width) luma samples.
            cb: (height, width // 2) blue-difference samples.
            cr: (height, width // 2) red-difference samples.
            interlaced: Selects the default field parity.
        """
        luma = np.asarray(luma)
        height, width = luma.shape
        data = np.empty((height, 2 * width), dtype=np.int64)
        data[:, 1::2] = luma
        data[:, 0::4] = cb
        data[:, 2::4] = cr
        return cls(data, field_parity=default_parity(height, interlaced))

    # =============================================================
    # Accessors
    # =============================================================
    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def width(self) -> int:
        return int(self.data.shape[1] // 2)

    @property
    def luma(self) -> np.ndarray:
        return self.data[:, 1::2]

    @property
    def cb(self) -> np.ndarray:
        return self.data[:, 0::4]

    @property
    def cr(self) -> np.ndarray:
        return self.data[:, 2::4]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RawFrame):
            return NotImplemented
        return (
            self.data.shape == other.data.shape
            and bool(np.array_equal(self.data, other.data))
            and bool(np.array_equal(self.field_parity, other.field_parity))
        )

    def __repr__(self) -> str:
        return f"RawFrame({self.width}x{self.height})"


def default_parity(height: int, interlaced: bool) -> np.ndarray:
    """Row parity of an interlaced (alternating) or progressive (all 0) frame."""
    if interlaced:
        return np.arange(height, dtype=np.uint8) % 2
    return np.zeros(height, dtype=np.uint8)
