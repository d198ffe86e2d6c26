# =============================================================
# File: operators.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-22
# Description:
#     Built-in pixel operators and their registry. luma_max stands
#     in for a visible/near-infrared detail fusion: it keeps the
#     brighter luma and the chroma of channel 0.
# =============================================================

import logging

import numpy as np

from src.core.errors import OperatorError
from src.core.registry import ComponentRegistry
from src.pipeline.base_operator import PixelOperator


class Passthrough(PixelOperator):
    """Forwards one channel unchanged."""

    name = "passthrough"

    def __init__(self, arity: int, channel: int = 0) -> None:
        super().__init__(arity)
        if not 0 <= channel < arity:
            raise OperatorError(f"passthrough: channel {channel} does not exist (arity {arity})")
        self.channel = channel

    def combine_luma(self, luma: np.ndarray) -> np.ndarray:
        return luma[self.channel]

    def combine_chroma(self, chroma: np.ndarray) -> np.ndarray:
        return chroma[self.channel]


class Average(PixelOperator):
    """Rounded mean of all channels."""

    name = "average"

    def _mean(self, values: np.ndarray) -> np.ndarray:
        return (values.sum(axis=0) + self.arity // 2) // self.arity

    def combine_luma(self, luma: np.ndarray) -> np.ndarray:
        return self._mean(luma)

    def combine_chroma(self, chroma: np.ndarray) -> np.ndarray:
        return self._mean(chroma)


class LumaMax(PixelOperator):
    """Brightest luma of all channels, chroma of channel 0."""

    name = "luma_max"

    def combine_luma(self, luma: np.ndarray) -> np.ndarray:
        return luma.max(axis=0)

    def combine_chroma(self, chroma: np.ndarray) -> np.ndarray:
        return chroma[0]


OPERATOR_REGISTRY: ComponentRegistry[PixelOperator] = ComponentRegistry("operator")
for _cls in (Passthrough, Average, LumaMax):
    OPERATOR_REGISTRY.register(_cls.name, _cls)


def create_operator(name: str, arity: int, **params) -> PixelOperator:
    """
    Builds a registered operator.

    Raises:
        ConfigError: If the name or its parameters are unknown.
    """
    operator = OPERATOR_REGISTRY.create(name, field="operator", arity=arity, **params)
    logging.info(f"Operators: '{name}' created for {arity} channel(s).")
    return operator
