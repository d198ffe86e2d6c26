# =============================================================
# File: fifo.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-19
# Description:
#     One-frame circular FIFO. The write side runs on a source clock,
#     the read side on the reference clock; both pointers are pulled
#     back to address 0 by their own frame starts.
# =============================================================

import logging
from typing import Optional, Tuple

import numpy as np

# (frame_index, line, sample) of a buffered byte.
Tag = Tuple[int, int, int]


# =============================================================
# CircularFifo Class
# =============================================================
class CircularFifo:
    """
    Fixed-capacity circular buffer of stream bytes plus their tags.

    Nothing is ever "full" or "empty" here: each side overwrites or
    re-reads in place, which is how a frame buffer behaves when the two
    clocks drift apart.
    """

    def __init__(self, capacity: int, channel: int = 0) -> None:
        """
        Initializes an idle FIFO.

        Args:
            capacity: Bytes held (one frame of active data).
            channel: Owning channel, for log messages.
        """
        if capacity <= 0:
            raise ValueError(f"capacity must be positive, got {capacity}")
        self.capacity = capacity
        self.channel = channel
        self.storage = np.zeros(capacity, dtype=np.uint8)
        self.tags = np.full((capacity, 3), -1, dtype=np.int64)
        self.write_index = 0
        self.read_index = 0
        self.write_enabled = False
        self.read_enabled = False
        self.frames_written = 0
        self.frames_read = 0
        self.write_restarts = 0
        self.read_restarts = 0

    @property
    def primed(self) -> bool:
        """True once one complete frame has been written."""
        return self.frames_written >= 1

    # =============================================================
    # Write side
    # =============================================================
    def restart_write(self) -> None:
        """Frame start on the write side: the next byte goes to address 0."""
        self.write_index = 0
        self.write_enabled = True
        self.write_restarts += 1

    def write(self, value: int, tag: Tag) -> None:
        """Stores one byte at the write pointer if writing is enabled."""
        if not self.write_enabled:
            return
        self.storage[self.write_index] = value
        self.tags[self.write_index] = tag
        self.write_index += 1
        if self.write_index == self.capacity:
            self.write_index = 0
            self.frames_written += 1
            if self.frames_written == 1:
                logging.info(f"CircularFifo: channel {self.channel} primed.")

    # =============================================================
    # Read side
    # =============================================================
    def restart_read(self) -> None:
        """Reference frame start: reading restarts at address 0."""
        self.read_index = 0
        self.read_enabled = True
        self.read_restarts += 1

    def read(self) -> Tuple[int, int, Optional[Tag]]:
        """
        Reads the byte at the read pointer and advances it.

        Returns:
            (address, value, tag); ``tag`` is None before the FIFO is primed.
        """
        address = self.read_index
        value = int(self.storage[address])
        tag = tuple(int(x) for x in self.tags[address]) if self.primed else None
        self.read_index += 1
        if self.read_index == self.capacity:
            self.read_index = 0
            self.frames_read += 1
        return address, value, tag
