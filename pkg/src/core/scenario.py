# =============================================================
# File: scenario.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-27
# Refactored: 2026-02-04
# Description:
#     Scenario files: JSON documents with a versioned `schema`
#     field, validated into frozen dataclasses. Unknown keys are
#     rejected everywhere and every error names its dotted path.
# =============================================================

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from src.core.artifacts import read_text
from src.core.config import (
    CONTENT_NAMES,
    DATA_MAX,
    DATA_MIN,
    DEFAULT_FILL_BYTE,
    DEFAULT_MAX_DRIFT_PPM,
    DEFAULT_MEASUREMENT_WINDOW,
    DEFAULT_NOMINAL_HZ,
    DRIFT_KINDS,
    ENGINE_NAMES,
    GEOMETRY_PROFILES,
    MAX_SIMULATED_SECONDS,
    OPERATOR_NAMES,
    PHASE_UNITS_PER_TICK,
    SCHEMA_VERSION,
)
from src.core.errors import ConfigError, GeometryError
from src.sync.sync_module import ReferencePolicy
from src.video.geometry import FrameGeometry

Json = Dict[str, Any]


# =============================================================
# Config records
# =============================================================
@dataclass(frozen=True)
class DriftConfig:
    """Drift section of one source."""

    kind: str = "none"
    ppm: float = 0.0
    period_s: float = 1.0
    phase: float = 0.0
    seed: Optional[int] = None
    step_ppm: float = 1.0
    interval_s: Optional[float] = None

    @property
    def bound_ppm(self) -> float:
        """Largest frequency deviation the profile can reach."""
        if self.kind == "none":
            return 0.0
        if self.kind == "random_walk" and not self.ppm:
            return DEFAULT_MAX_DRIFT_PPM
        return abs(self.ppm)


@dataclass(frozen=True)
class SourceConfig:
    """
    One video source.

    Attributes:
        id: Stream name.
        nominal_hz: Nominal byte clock.
        startup_delay_units: Startup delay on the phase grid.
        drift: Drift profile settings.
        content: Content generator name.
        content_params: Extra generator arguments.
        input_dump: Pre-recorded .656 stream used instead of generated content.
    """

    id: str
    nominal_hz: Fraction = Fraction(DEFAULT_NOMINAL_HZ)
    startup_delay_units: int = 0
    drift: DriftConfig = field(default_factory=DriftConfig)
    content: str = "gradient"
    content_params: Tuple[Tuple[str, Any], ...] = ()
    input_dump: Optional[Path] = None

    @property
    def startup_delay_ns(self) -> Fraction:
        return Fraction(self.startup_delay_units, PHASE_UNITS_PER_TICK)


@dataclass(frozen=True)
class OutputConfig:
    """Which artifacts a run writes."""

    dump: bool = True
    report: bool = True
    trace: bool = False
    frames: int = 0
    inputs: bool = False
    include_timing: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated scenario."""

    name: str
    geometry: FrameGeometry
    sources: Tuple[SourceConfig, ...]
    frame_count: int = 10
    seed: int = 0
    reference: ReferencePolicy = ReferencePolicy()
    operator: str = "passthrough"
    operator_params: Tuple[Tuple[str, Any], ...] = ()
    engine: str = "batch"
    fill_byte: int = DEFAULT_FILL_BYTE
    include_priming: bool = False
    measurement_window: int = DEFAULT_MEASUREMENT_WINDOW
    outputs: OutputConfig = OutputConfig()
    geometry_name: str = "ntsc"

    @property
    def channel_count(self) -> int:
        return len(self.sources)


# =============================================================
# Field helpers
# =============================================================
def _check_keys(data: Json, allowed: List[str], path: str) -> None:
    if not isinstance(data, dict):
        raise ConfigError(path or "<root>", "expected an object")
    for key in data:
        if key not in allowed:
            raise ConfigError(_join(path, key), "unknown key")


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _int(data: Json, key: str, path: str, default: int, minimum: Optional[int] = None,
         maximum: Optional[int] = None) -> int:
    value = data.get(key, default)
    name = _join(path, key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ConfigError(name, f"must be <= {maximum}, got {value}")
    return value


def _number(data: Json, key: str, path: str, default: Optional[float]) -> Optional[float]:
    value = data.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(_join(path, key), f"expected a number, got {value!r}")
    return float(value)


def _bool(data: Json, key: str, path: str, default: bool) -> bool:
    value = data.get(key, default)
    if not isinstance(value, bool):
        raise ConfigError(_join(path, key), f"expected true or false, got {value!r}")
    return value


def _string(data: Json, key: str, path: str, default: Optional[str]) -> Optional[str]:
    value = data.get(key, default)
    if value is not None and not isinstance(value, str):
        raise ConfigError(_join(path, key), f"expected a string, got {value!r}")
    return value


def _exact(value: Any, name: str) -> Fraction:
    """Exact rational from an int, a float (via its decimal text) or a string such as "8192000/27"."""
    if isinstance(value, bool):
        raise ConfigError(name, f"expected a number, got {value!r}")
    try:
        if isinstance(value, float):
            return Fraction(repr(value))
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(name, f"expected a number, got {value!r}") from None


def _named(value: Any, path: str, known: List[str]) -> Tuple[str, Tuple[Tuple[str, Any], ...]]:
    """Parses "name" or {"name": ..., <params>} for registry-backed components."""
    if isinstance(value, str):
        name, params = value, {}
    elif isinstance(value, dict):
        params = dict(value)
        name = params.pop("name", None)
        if not isinstance(name, str):
            raise ConfigError(_join(path, "name"), "missing component name")
    else:
        raise ConfigError(path, f"expected a name or an object, got {value!r}")
    if name not in known:
        raise ConfigError(path, f"unknown component '{name}' (known: {', '.join(known)})")
    return name, tuple(sorted(params.items()))


# =============================================================
# Sections
# =============================================================
def parse_geometry(value: Union[str, Json], path: str = "geometry") -> Tuple[str, FrameGeometry]:
    """A profile name or an explicit FrameGeometry object."""
    if isinstance(value, str):
        if value not in GEOMETRY_PROFILES:
            raise ConfigError(path, f"unknown geometry profile '{value}' (known: {', '.join(GEOMETRY_PROFILES)})")
        return value, FrameGeometry.profile(value)
    _check_keys(value, list(GEOMETRY_PROFILES["ntsc"]), path)
    try:
        return "custom", FrameGeometry(**value)
    except GeometryError as exc:
        raise ConfigError(path, str(exc)) from exc


def parse_drift(data: Json, path: str) -> DriftConfig:
    _check_keys(data, ["kind", "ppm", "period_s", "phase", "seed", "step_ppm", "interval_s"], path)
    kind = _string(data, "kind", path, "none")
    if kind not in DRIFT_KINDS:
        raise ConfigError(_join(path, "kind"), f"unknown drift kind '{kind}' (known: {', '.join(DRIFT_KINDS)})")
    period_s = _number(data, "period_s", path, 1.0)
    if period_s <= 0:
        raise ConfigError(_join(path, "period_s"), "must be positive")
    interval_s = _number(data, "interval_s", path, None)
    if interval_s is not None and interval_s <= 0:
        raise ConfigError(_join(path, "interval_s"), "must be positive")
    seed = data.get("seed")
    if seed is not None:
        seed = _int(data, "seed", path, 0, minimum=0)
    ppm = _number(data, "ppm", path, 0.0)
    if abs(ppm) >= 1e6:
        raise ConfigError(_join(path, "ppm"), "must lie strictly between -1e6 and 1e6")
    return DriftConfig(
        kind=kind,
        ppm=ppm,
        period_s=period_s,
        phase=_number(data, "phase", path, 0.0),
        seed=seed,
        step_ppm=abs(_number(data, "step_ppm", path, 1.0)),
        interval_s=interval_s,
    )


def parse_source(data: Json, index: int, geometry: FrameGeometry, base_dir: Path) -> SourceConfig:
    path = f"sources[{index}]"
    _check_keys(data, ["id", "nominal_hz", "startup_delay_ns", "startup_delay_frames", "drift", "content",
                       "input_dump"], path)
    source_id = _string(data, "id", path, f"source{index}")
    nominal_hz = _exact(data.get("nominal_hz", DEFAULT_NOMINAL_HZ), _join(path, "nominal_hz"))
    if nominal_hz <= 0:
        raise ConfigError(_join(path, "nominal_hz"), "must be positive")

    if "startup_delay_ns" in data and "startup_delay_frames" in data:
        raise ConfigError(_join(path, "startup_delay_ns"), "give startup_delay_ns or startup_delay_frames, not both")
    if "startup_delay_frames" in data:
        frames = _exact(data["startup_delay_frames"], _join(path, "startup_delay_frames"))
        delay_ns = frames * geometry.bytes_per_frame * 1_000_000_000 / nominal_hz
    else:
        delay_ns = _exact(data.get("startup_delay_ns", 0), _join(path, "startup_delay_ns"))
    if delay_ns < 0:
        raise ConfigError(_join(path, "startup_delay_ns"), "must be non-negative")
    delay_units = round(delay_ns * PHASE_UNITS_PER_TICK)

    content, params = _named(data.get("content", "gradient"), _join(path, "content"), CONTENT_NAMES)
    dump = _string(data, "input_dump", path, None)
    return SourceConfig(
        id=source_id,
        nominal_hz=nominal_hz,
        startup_delay_units=delay_units,
        drift=parse_drift(data.get("drift", {}), _join(path, "drift")),
        content=content,
        content_params=params,
        input_dump=(base_dir / dump) if dump else None,
    )


def parse_outputs(data: Json, path: str = "outputs") -> OutputConfig:
    _check_keys(data, ["dump", "report", "trace", "frames", "inputs", "include_timing"], path)
    return OutputConfig(
        dump=_bool(data, "dump", path, True),
        report=_bool(data, "report", path, True),
        trace=_bool(data, "trace", path, False),
        frames=_int(data, "frames", path, 0, minimum=0),
        inputs=_bool(data, "inputs", path, False),
        include_timing=_bool(data, "include_timing", path, False),
    )


# =============================================================
# Entry points
# =============================================================
_TOP_LEVEL = [
    "schema", "name", "geometry", "frame_count", "seed", "reference", "operator", "engine", "fill_byte",
    "include_priming", "measurement_window", "outputs", "sources",
]


def parse_scenario(data: Json, base_dir: Union[str, Path] = ".") -> ScenarioConfig:
    """
    Validates a scenario document.

    Args:
        data: Decoded JSON object.
        base_dir: Directory that relative input dump paths are resolved against.

    Returns:
        The ScenarioConfig.

    Raises:
        ConfigError: On the first invalid field.
    """
    _check_keys(data, _TOP_LEVEL, "")
    schema = data.get("schema")
    if schema != SCHEMA_VERSION:
        raise ConfigError("schema", f"expected {SCHEMA_VERSION}, got {schema!r}")
    geometry_name, geometry = parse_geometry(data.get("geometry", "ntsc"))

    sources = data.get("sources")
    if not isinstance(sources, list) or not sources:
        raise ConfigError("sources", "at least one source is required")
    parsed = tuple(parse_source(item, index, geometry, Path(base_dir)) for index, item in enumerate(sources))
    ids = [source.id for source in parsed]
    if len(set(ids)) != len(ids):
        raise ConfigError("sources", f"source ids must be unique, got {ids}")

    reference = ReferencePolicy.parse(_string(data, "reference", "", "fixed(0)"))
    if reference.kind == "fixed" and reference.index >= len(parsed):
        raise ConfigError("reference", f"fixed({reference.index}) is out of range for {len(parsed)} source(s)")

    operator, operator_params = _named(data.get("operator", "passthrough"), "operator",
                                       OPERATOR_NAMES)
    engine = _string(data, "engine", "", "batch")
    if engine not in ENGINE_NAMES:
        raise ConfigError("engine", f"unknown engine '{engine}' (known: {', '.join(ENGINE_NAMES)})")

    frame_count = _int(data, "frame_count", "", 10, minimum=1)
    longest = max(
        float(source.startup_delay_ns) / 1e9
        + frame_count * geometry.bytes_per_frame / (float(source.nominal_hz) * (1 - source.drift.bound_ppm * 1e-6))
        for source in parsed
    )
    if longest > MAX_SIMULATED_SECONDS:
        raise ConfigError("frame_count", f"run would last {longest:.1f} s including startup delays and drift; "
                                         f"the limit is {MAX_SIMULATED_SECONDS} s")

    name = _string(data, "name", "", "scenario")
    config = ScenarioConfig(
        name=name,
        geometry=geometry,
        geometry_name=geometry_name,
        sources=parsed,
        frame_count=frame_count,
        seed=_int(data, "seed", "", 0, minimum=0),
        reference=reference,
        operator=operator,
        operator_params=operator_params,
        engine=engine,
        fill_byte=_int(data, "fill_byte", "", DEFAULT_FILL_BYTE, minimum=DATA_MIN, maximum=DATA_MAX),
        include_priming=_bool(data, "include_priming", "", False),
        measurement_window=_int(data, "measurement_window", "", DEFAULT_MEASUREMENT_WINDOW, minimum=2),
        outputs=parse_outputs(data.get("outputs", {})),
    )
    logging.info(f"Scenario: '{name}' loaded ({len(parsed)} source(s), {frame_count} frame(s), {geometry_name}).")
    return config


def load_scenario(path: Union[str, Path], seed: Optional[int] = None, geometry: Optional[str] = None) -> ScenarioConfig:
    """
    Reads and validates a scenario file, then applies CLI overrides.

    Raises:
        ArtifactIOError: If the file cannot be read.
        ConfigError: If it is not valid JSON or fails validation.
    """
    text = read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from exc
    if isinstance(data, dict):
        if seed is not None:
            data["seed"] = seed
        if geometry is not None:
            data["geometry"] = geometry
    return parse_scenario(data, Path(path).parent)

