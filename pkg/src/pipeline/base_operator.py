# =============================================================
# File: base_operator.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-22
# Description:
#     Abstract base class for pixel operators: the processing hook
#     that combines K co-located 4:2:2 samples into one output
#     sample. Operators work on luma and chroma bytes separately,
#     so the same rule serves single samples and whole frames.
# =============================================================

from abc import ABC, abstractmethod
from typing import NamedTuple, Sequence

import numpy as np

from src.core.config import DATA_MAX, DATA_MIN
from src.core.errors import OperatorError


class Sample(NamedTuple):
    """One 4:2:2 sample: a luma byte and the chroma byte (Cb or Cr) sent with it."""

    y: int
    c: int


# =============================================================
# PixelOperator Class
# =============================================================
class PixelOperator(ABC):
    """
    Stateless K-input pixel operator.

    Subclasses implement ``combine_luma`` and ``combine_chroma`` on
    arrays of shape (K, n); everything else is shared.
    """

    name: str = "abstract"

    def __init__(self, arity: int) -> None:
        """
        Initializes the operator.

        Args:
            arity: Number of input channels (K).
        """
        if arity < 1:
            raise OperatorError(f"{self.name}: arity must be at least 1, got {arity}")
        self.arity = arity

    # ---------------------------------------------------------
    # Abstract Methods
    # ---------------------------------------------------------
    @abstractmethod
    def combine_luma(self, luma: np.ndarray) -> np.ndarray:
        """
        Combines luma bytes.

        Args:
            luma: int64 array of shape (K, n).

        Returns:
            n output values (clamped by the caller).
        """
        pass

    @abstractmethod
    def combine_chroma(self, chroma: np.ndarray) -> np.ndarray:
        """Combines chroma bytes; same contract as ``combine_luma``."""
        pass

    # ---------------------------------------------------------
    # Shared entry points
    # ---------------------------------------------------------
    def _check_arity(self, count: int) -> None:
        if count != self.arity:
            raise OperatorError(f"{self.name}: expected {self.arity} input(s), got {count}")

    def apply_samples(self, samples: Sequence[Sample]) -> Sample:
        """
        Combines one co-located sample per channel.

        Raises:
            OperatorError: If ``len(samples)`` differs from the arity.
        """
        self._check_arity(len(samples))
        luma = np.array([[sample.y] for sample in samples], dtype=np.int64)
        chroma = np.array([[sample.c] for sample in samples], dtype=np.int64)
        y = np.clip(self.combine_luma(luma), DATA_MIN, DATA_MAX)
        c = np.clip(self.combine_chroma(chroma), DATA_MIN, DATA_MAX)
        return Sample(int(y[0]), int(c[0]))

    def apply_streams(self, streams: np.ndarray, luma_mask: np.ndarray) -> np.ndarray:
        """
        Combines K aligned byte streams.

        Args:
            streams: uint8 array of shape (K, n).
            luma_mask: Bool array of length n; True where the byte is luma.

        Returns:
            n output bytes in [0x01, 0xFE].
        """
        streams = np.asarray(streams)
        self._check_arity(streams.shape[0])
        values = streams.astype(np.int64)
        out = np.empty(values.shape[1], dtype=np.int64)
        out[luma_mask] = self.combine_luma(values[:, luma_mask])
        out[~luma_mask] = self.combine_chroma(values[:, ~luma_mask])
        return np.clip(out, DATA_MIN, DATA_MAX).astype(np.uint8)
