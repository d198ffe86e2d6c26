# =============================================================
# File: content.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-23
# Description:
#     Synthetic frame generators for simulated sources. Each one is
#     a callable frame_index -> RawFrame built for one geometry.
# =============================================================

import logging
from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np

from src.core.registry import ComponentRegistry
from src.video.frame import RawFrame
from src.video.geometry import FrameGeometry


# =============================================================
# ContentGenerator Class
# =============================================================
class ContentGenerator(ABC):
    """
    Base class for frame generators.

    Subclasses provide ``planes``; calling the generator packs them into
    a RawFrame with the geometry's field parity.
    """

    name: str = "abstract"

    def __init__(self, geometry: FrameGeometry, seed: Optional[int] = None) -> None:
        self.geometry = geometry
        self.seed = seed

    # ---------------------------------------------------------
    # Abstract Methods
    # ---------------------------------------------------------
    @abstractmethod
    def planes(self, frame_index: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Returns (luma, cb, cr) planes for one frame."""
        pass

    def __call__(self, frame_index: int) -> RawFrame:
        luma, cb, cr = self.planes(frame_index)
        return RawFrame.from_planes(luma, cb, cr, interlaced=self.geometry.interlaced)

    def _shape(self):
        return self.geometry.height, self.geometry.width


class ConstantContent(ContentGenerator):
    """A flat colour."""

    name = "constant"

    def __init__(self, geometry: FrameGeometry, seed: Optional[int] = None,
                 y: int = 128, cb: int = 128, cr: int = 128) -> None:
        super().__init__(geometry, seed)
        self.level = (y, cb, cr)

    def planes(self, frame_index: int):
        height, width = self._shape()
        y, cb, cr = self.level
        return (np.full((height, width), y), np.full((height, width // 2), cb), np.full((height, width // 2), cr))


class GradientContent(ContentGenerator):
    """A horizontal luma ramp that scrolls by ``speed`` pixels per frame."""

    name = "gradient"

    def __init__(self, geometry: FrameGeometry, seed: Optional[int] = None, speed: int = 4) -> None:
        super().__init__(geometry, seed)
        self.speed = speed

    def planes(self, frame_index: int):
        height, width = self._shape()
        columns = (np.arange(width) + self.speed * frame_index) % width
        ramp = 16 + columns * 219 // max(width - 1, 1)
        rows = np.arange(height)[:, None]
        luma = np.broadcast_to(ramp, (height, width))
        cb = np.broadcast_to(64 + rows * 128 // max(height - 1, 1), (height, width // 2))
        cr = np.full((height, width // 2), 128)
        return luma, cb, cr


class NoiseContent(ContentGenerator):
    """Uniform noise over the whole data range; reproducible per (seed, frame)."""

    name = "noise"

    def planes(self, frame_index: int):
        height, width = self._shape()
        rng = np.random.default_rng([self.seed or 0, frame_index])
        return (
            rng.integers(1, 255, size=(height, width)),
            rng.integers(1, 255, size=(height, width // 2)),
            rng.integers(1, 255, size=(height, width // 2)),
        )


class NumberedContent(ContentGenerator):
    """
    Grey frames with the frame index drawn as a row of binary blocks
    (white = 1, black = 0, least significant bit first).
    """

    name = "numbered"

    def __init__(self, geometry: FrameGeometry, seed: Optional[int] = None, bits: int = 16, block: int = 0) -> None:
        super().__init__(geometry, seed)
        self.bits = bits
        self.block = block or max(2, min(geometry.width // bits, geometry.height // 4)) // 2 * 2

    def planes(self, frame_index: int):
        height, width = self._shape()
        luma = np.full((height, width), 128)
        for bit in range(self.bits):
            left = bit * self.block
            if left + self.block > width:
                logging.debug("NumberedContent: frame too narrow for all index bits.")
                break
            luma[: self.block, left:left + self.block] = 235 if (frame_index >> bit) & 1 else 16
        return luma, np.full((height, width // 2), 128), np.full((height, width // 2), 128)


def read_frame_number(frame: RawFrame, bits: int = 16, block: int = 0) -> int:
    """Decodes the index drawn by NumberedContent (same bits/block arguments)."""
    block = block or max(2, min(frame.width // bits, frame.height // 4)) // 2 * 2
    value = 0
    for bit in range(bits):
        left = bit * block
        if left + block > frame.width:
            break
        if int(frame.luma[block // 2, left + block // 2]) > 128:
            value |= 1 << bit
    return value


CONTENT_REGISTRY: ComponentRegistry[ContentGenerator] = ComponentRegistry("content")
for _cls in (ConstantContent, GradientContent, NoiseContent, NumberedContent):
    CONTENT_REGISTRY.register(_cls.name, _cls)


def create_content(name: str, geometry: FrameGeometry, seed: Optional[int] = None, field: str = "content",
                   **params) -> ContentGenerator:
    """Builds a registered content generator."""
    return CONTENT_REGISTRY.create(name, field=field, geometry=geometry, seed=seed, **params)
