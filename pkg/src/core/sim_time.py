# =============================================================
# File: sim_time.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-10
# Description:
#     Exact simulation time: integer nanosecond ticks plus an exact
#     rational residue. Clock edges are placed on a phase grid of
#     PHASE_UNITS_PER_TICK units per tick, so edge arithmetic stays
#     in integers and never accumulates floating-point error.
# =============================================================

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from src.core.config import PHASE_UNITS_PER_TICK, TICKS_PER_SECOND

Number = Union[int, Fraction, str]


# =============================================================
# SimTime Class
# =============================================================
@dataclass(frozen=True, order=True)
class SimTime:
    """
    A point on the global simulation time axis.

    Ordering compares ``(ticks, residue)`` lexicographically, which is the
    same as comparing the exact values because ``0 <= residue < 1``.

    Attributes:
        ticks: Whole nanoseconds since the simulation start.
        residue: Exact fraction of the next nanosecond, in [0, 1).
    """

    ticks: int
    residue: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.ticks < 0:
            raise ValueError(f"SimTime cannot be negative (ticks={self.ticks})")
        if not isinstance(self.residue, Fraction):
            object.__setattr__(self, "residue", Fraction(self.residue))
        if not 0 <= self.residue < 1:
            raise ValueError(f"SimTime residue must lie in [0, 1), got {self.residue}")

    # =============================================================
    # Constructors
    # =============================================================
    @classmethod
    def from_ns(cls, value: Number) -> "SimTime":
        """Builds a SimTime from an exact nanosecond count."""
        exact = Fraction(value)
        whole = exact.numerator // exact.denominator
        return cls(whole, exact - whole)

    @classmethod
    def from_seconds(cls, value: Number) -> "SimTime":
        """Builds a SimTime from an exact number of seconds (int, Fraction or decimal string)."""
        return cls.from_ns(Fraction(value) * TICKS_PER_SECOND)

    @classmethod
    def from_units(cls, units: int) -> "SimTime":
        """Builds a SimTime from a phase-grid position."""
        units = int(units)
        return cls(units // PHASE_UNITS_PER_TICK, Fraction(units % PHASE_UNITS_PER_TICK, PHASE_UNITS_PER_TICK))

    # =============================================================
    # Conversions
    # =============================================================
    @property
    def exact_ns(self) -> Fraction:
        """The exact time in nanoseconds."""
        return self.ticks + self.residue

    @property
    def seconds(self) -> Fraction:
        """The exact time in seconds."""
        return self.exact_ns / TICKS_PER_SECOND

    @property
    def units(self) -> int:
        """
        The phase-grid position of this time.

        Raises:
            ValueError: If the time does not lie on the phase grid.
        """
        scaled = self.residue * PHASE_UNITS_PER_TICK
        if scaled.denominator != 1:
            raise ValueError(f"{self!r} is not on the phase grid")
        return self.ticks * PHASE_UNITS_PER_TICK + scaled.numerator

    def difference_ns(self, other: "SimTime") -> Fraction:
        """Signed exact difference ``self - other`` in nanoseconds."""
        return self.exact_ns - other.exact_ns

    # =============================================================
    # Arithmetic
    # =============================================================
    def __add__(self, other: "SimTime") -> "SimTime":
        if not isinstance(other, SimTime):
            return NotImplemented
        return SimTime.from_ns(self.exact_ns + other.exact_ns)

    def __str__(self) -> str:
        if self.residue == 0:
            return f"{self.ticks} ns"
        return f"{self.ticks}+{self.residue} ns"


ZERO: SimTime = SimTime(0)


def units_to_ns(units: int) -> Fraction:
    """Exact nanoseconds for a phase-grid position."""
    return Fraction(int(units), PHASE_UNITS_PER_TICK)
