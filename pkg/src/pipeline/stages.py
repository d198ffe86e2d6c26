# =============================================================
# File: stages.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-24
# Description:
#     The processing stage around the synchronizer: the interface
#     (decode), the pixel operation, the output formatter (encode)
#     and the re-timing of output bytes on the reference clock.
# =============================================================

import logging
from typing import Iterable, Sequence, Tuple

import numpy as np

from src.clocks.clock_model import ClockModel
from src.clocks.source import TimedStream
from src.pipeline.base_operator import PixelOperator, Sample
from src.video.codec import ByteSource, DecodeResult, decode_stream, encode_frame, encode_frames
from src.video.frame import RawFrame
from src.video.geometry import FrameGeometry


def interface_decode(stream: ByteSource, geometry: FrameGeometry) -> DecodeResult:
    """
    Decodes a BT.656 stream into frames, line records and codes.

    Decoding never fails; problems come back as warnings on the result.
    """
    result = decode_stream(stream, geometry)
    incomplete = sum(1 for decoded in result.frames if not decoded.complete)
    if incomplete:
        logging.warning(f"Interface: {incomplete} incomplete frame(s).")
    return result


def apply_pixel_operator(operator: PixelOperator, samples: Iterable[Tuple[int, int]]) -> Sample:
    """
    Applies ``operator`` to one K-tuple of co-located (Y, C) samples.

    Raises:
        OperatorError: If the tuple length differs from the operator's arity.
    """
    return operator.apply_samples([Sample(*sample) for sample in samples])


def output_format(frame: RawFrame, geometry: FrameGeometry) -> bytes:
    """Formats a processed frame as BT.656 (blanking regenerated from the geometry)."""
    return encode_frame(frame, geometry)


def encode_output(frames: Sequence[RawFrame], reference: ClockModel, geometry: FrameGeometry,
                  first_edge: int = 0, stream_id: str = "output") -> TimedStream:
    """
    Re-times formatted output on the reference clock.

    Args:
        frames: Output frames in display order.
        reference: The reference clock that times every output byte.
        geometry: Output geometry.
        first_edge: Reference edge carrying the first output byte.
        stream_id: Name of the output stream.

    Returns:
        One byte per reference edge starting at ``first_edge``.
    """
    data = encode_frames(frames, geometry) if frames else np.zeros(0, dtype=np.uint8)
    return TimedStream(stream_id, reference, geometry, data, edge_offset=first_edge)
