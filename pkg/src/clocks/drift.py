# =============================================================
# File: drift.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-10
# Refactored: 2026-01-26
# Description:
#     Clock drift profiles. Each profile maps simulation time (in
#     seconds) to a frequency deviation in parts per million and
#     declares the largest magnitude it can ever reach.
# =============================================================

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, List, Optional

import numpy as np

from src.core.config import DEFAULT_DRIFT_INTERVAL_S

# Random-walk steps are drawn in fixed-size blocks so the sequence never
# depends on how far ahead a caller happened to look.
_WALK_BLOCK: int = 1024


class DriftProfile(ABC):
    """
    Abstract base class for drift profiles.

    Subclasses are frozen dataclasses so that two clocks built from the
    same configuration compare (and hash) equal.
    """

    kind: ClassVar[str] = "abstract"

    @abstractmethod
    def ppm_at(self, t_seconds: float) -> float:
        """
        Frequency deviation at a point in time.

        Args:
            t_seconds: Global simulation time in seconds (>= 0).

        Returns:
            Deviation in parts per million.
        """
        raise NotImplementedError

    @property
    @abstractmethod
    def bound_ppm(self) -> float:
        """Largest |ppm_at(t)| over all t."""
        raise NotImplementedError

    @property
    def is_static(self) -> bool:
        """True when the deviation never changes over time."""
        return False

    def describe(self) -> Dict[str, Any]:
        """Scenario-style description used in reports."""
        return {"kind": self.kind}


# =============================================================
# Static profiles
# =============================================================
@dataclass(frozen=True)
class NoDrift(DriftProfile):
    """An ideal oscillator."""

    kind: ClassVar[str] = "none"

    def ppm_at(self, t_seconds: float) -> float:
        return 0.0

    @property
    def bound_ppm(self) -> float:
        return 0.0

    @property
    def is_static(self) -> bool:
        return True


@dataclass(frozen=True)
class ConstantDrift(DriftProfile):
    """A fixed frequency offset."""

    offset_ppm: float = 0.0
    kind: ClassVar[str] = "constant"

    def ppm_at(self, t_seconds: float) -> float:
        return float(self.offset_ppm)

    @property
    def bound_ppm(self) -> float:
        return abs(float(self.offset_ppm))

    @property
    def is_static(self) -> bool:
        return True

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "ppm": self.offset_ppm}


# =============================================================
# Time-varying profiles
# =============================================================
@dataclass(frozen=True)
class SinusoidalDrift(DriftProfile):
    """
    ``amplitude_ppm * sin(2*pi*t/period_s + phase)``.

    Attributes:
        amplitude_ppm: Peak deviation.
        period_s: Oscillation period in seconds.
        phase: Phase offset in radians.
    """

    amplitude_ppm: float = 0.0
    period_s: float = 1.0
    phase: float = 0.0
    kind: ClassVar[str] = "sinusoidal"

    def __post_init__(self) -> None:
        if self.period_s <= 0:
            raise ValueError(f"period_s must be positive, got {self.period_s}")

    def ppm_at(self, t_seconds: float) -> float:
        return self.amplitude_ppm * math.sin(2.0 * math.pi * t_seconds / self.period_s + self.phase)

    @property
    def bound_ppm(self) -> float:
        return abs(float(self.amplitude_ppm))

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "ppm": self.amplitude_ppm, "period_s": self.period_s, "phase": self.phase}


@dataclass(frozen=True)
class RandomWalkDrift(DriftProfile):
    """
    A seeded random walk: every ``interval_s`` the deviation moves by
    +/- ``step_ppm`` and is clamped to [-bound, +bound]. It starts at 0.
    """

    step_ppm: float = 1.0
    bound: float = 100.0
    seed: Optional[int] = None
    interval_s: float = DEFAULT_DRIFT_INTERVAL_S
    kind: ClassVar[str] = "random_walk"
    _walk: List[float] = field(default_factory=lambda: [0.0], init=False, repr=False, compare=False, hash=False)
    _rng: List[np.random.Generator] = field(default_factory=list, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.interval_s <= 0:
            raise ValueError(f"interval_s must be positive, got {self.interval_s}")
        if self.step_ppm < 0 or self.bound < 0:
            raise ValueError("step_ppm and bound must be non-negative")

    def _extend(self, steps: int) -> None:
        if not self._rng:
            self._rng.append(np.random.default_rng(self.seed))
        rng = self._rng[0]
        value = self._walk[-1]
        while len(self._walk) <= steps:
            for sign in rng.choice((-1.0, 1.0), size=_WALK_BLOCK):
                value = min(self.bound, max(-self.bound, value + sign * self.step_ppm))
                self._walk.append(value)

    def ppm_at(self, t_seconds: float) -> float:
        step = max(0, int(t_seconds // self.interval_s))
        if step >= len(self._walk):
            self._extend(step)
        return self._walk[step]

    @property
    def bound_ppm(self) -> float:
        return abs(float(self.bound))

    def describe(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "step_ppm": self.step_ppm,
            "ppm": self.bound,
            "seed": self.seed,
            "interval_s": self.interval_s,
        }
