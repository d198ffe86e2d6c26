# =============================================================
# File: image_export.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-29
# Description:
#     Stream dump files (flat .656 binaries) and frame image
#     exports: binary PGM of the luma plane and binary PPM after
#     4:2:2 -> RGB conversion with BT.601 coefficients.
# =============================================================

import io
import logging
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image

from src.core.artifacts import read_bytes, write_bytes_atomic
from src.video.frame import RawFrame

PathLike = Union[str, Path]


# =============================================================
# Stream dumps
# =============================================================
def write_dump(path: PathLike, stream: Union[bytes, np.ndarray]) -> Path:
    """Writes a stream dump atomically; no header, no container."""
    payload = stream.tobytes() if isinstance(stream, np.ndarray) else bytes(stream)
    return write_bytes_atomic(path, payload)


def read_dump(path: PathLike) -> np.ndarray:
    """Reads a stream dump as a read-only uint8 array."""
    return np.frombuffer(read_bytes(path), dtype=np.uint8)


# =============================================================
# Colour conversion
# =============================================================
def frame_to_rgb(frame: RawFrame) -> np.ndarray:
    """
    Converts a 4:2:2 frame to 8-bit RGB.

    Chroma is repeated horizontally (nearest neighbour) before the
    studio-range BT.601 matrix is applied.

    Returns:
        uint8 array of shape (height, width, 3).
    """
    y = frame.luma.astype(np.float64) - 16.0
    cb = np.repeat(frame.cb.astype(np.float64), 2, axis=1) - 128.0
    cr = np.repeat(frame.cr.astype(np.float64), 2, axis=1) - 128.0
    r = 1.164 * y + 1.596 * cr
    g = 1.164 * y - 0.392 * cb - 0.813 * cr
    b = 1.164 * y + 2.017 * cb
    rgb = np.stack((r, g, b), axis=-1)
    return np.clip(np.rint(rgb), 0, 255).astype(np.uint8)


def _save_image(image: Image.Image, path: PathLike) -> Path:
    buffer = io.BytesIO()
    image.save(buffer, format="PPM")
    return write_bytes_atomic(path, buffer.getvalue())


def export_pgm(frame: RawFrame, path: PathLike) -> Path:
    """Writes the luma plane as a binary PGM (P5)."""
    target = _save_image(Image.fromarray(np.ascontiguousarray(frame.luma)), path)
    logging.info(f"ImageExport: luma of {frame!r} written to {target}.")
    return target


def export_ppm(frame: RawFrame, path: PathLike) -> Path:
    """Writes the frame as a binary PPM (P6) after BT.601 conversion."""
    target = _save_image(Image.fromarray(frame_to_rgb(frame)), path)
    logging.info(f"ImageExport: {frame!r} written to {target}.")
    return target
