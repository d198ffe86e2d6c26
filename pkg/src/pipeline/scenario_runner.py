# =============================================================
# File: scenario_runner.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-28
# Refactored: 2026-02-05
# Description:
#     Runs one scenario end to end: builds the clocks and sources,
#     measures the clocks, picks the reference, synchronizes and
#     processes, re-times the output and writes the artifacts.
# =============================================================

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

from src.clocks.clock_model import ClockModel
from src.clocks.drift import ConstantDrift, DriftProfile, NoDrift, RandomWalkDrift, SinusoidalDrift
from src.clocks.measurement import ClockStats, measure_source_clock
from src.clocks.source import TimedStream, derive_seed, generate_source, stream_from_dump
from src.core.artifacts import ensure_directory, write_text_atomic
from src.core.config import (
    SEED_PURPOSE_CONTENT,
    SEED_PURPOSE_DRIFT,
    STREAM_DUMP_SUFFIX,
)
from src.core.scenario import ScenarioConfig, SourceConfig
from src.core.sim_time import SimTime
from src.pipeline.content import create_content
from src.pipeline.engine import EngineResult, run_batch
from src.pipeline.event_loop import run_event_loop
from src.pipeline.operators import create_operator
from src.pipeline.report import SimulationReport, describe_source
from src.pipeline.stages import encode_output
from src.sync.sync_module import select_reference
from src.sync.trace import format_trace_csv
from src.video.geometry import FrameGeometry
from src.video.image_export import export_pgm, export_ppm, read_dump, write_dump

Engine = Callable[..., EngineResult]

ENGINES: Dict[str, Engine] = {
    "batch": run_batch,
    "event": run_event_loop,
}


# =============================================================
# Building sources
# =============================================================
def build_drift(source: SourceConfig, geometry: FrameGeometry, seed: int, index: int) -> DriftProfile:
    """Drift profile of one source; random walks get a derived seed unless one is configured."""
    drift = source.drift
    if drift.kind == "constant":
        return ConstantDrift(drift.ppm)
    if drift.kind == "sinusoidal":
        return SinusoidalDrift(drift.ppm, drift.period_s, drift.phase)
    if drift.kind == "random_walk":
        interval_s = drift.interval_s or float(geometry.bytes_per_frame / source.nominal_hz)
        walk_seed = drift.seed if drift.seed is not None else derive_seed(seed, index, SEED_PURPOSE_DRIFT)
        return RandomWalkDrift(drift.step_ppm, drift.bound_ppm, walk_seed, interval_s)
    return NoDrift()


def build_clock(source: SourceConfig, geometry: FrameGeometry, seed: int, index: int) -> ClockModel:
    """The clock of one source; drift is re-evaluated once per line of bytes."""
    return ClockModel(
        nominal_hz=source.nominal_hz,
        drift=build_drift(source, geometry, seed, index),
        startup_delay=SimTime.from_units(source.startup_delay_units),
        step_edges=geometry.bytes_per_line,
    )


def build_stream(config: ScenarioConfig, index: int) -> TimedStream:
    """Generates (or loads) the timed stream of source ``index``."""
    source = config.sources[index]
    model = build_clock(source, config.geometry, config.seed, index)
    if source.input_dump is not None:
        logging.info(f"Runner: source '{source.id}' replays {source.input_dump}.")
        return stream_from_dump(source.id, model, config.geometry, read_dump(source.input_dump))
    content = create_content(
        source.content,
        config.geometry,
        seed=derive_seed(config.seed, index, SEED_PURPOSE_CONTENT),
        field=f"sources[{index}].content",
        **dict(source.content_params),
    )
    return generate_source(source.id, model, config.geometry, content, config.frame_count)


def measure_streams(streams: List[TimedStream], window: int) -> List[ClockStats]:
    """Clock statistics of every stream over its own length."""
    return [measure_source_clock(stream.model, len(stream), window) for stream in streams]


# =============================================================
# Running
# =============================================================
@dataclass
class ScenarioRun:
    """In-memory outcome of a scenario."""

    config: ScenarioConfig
    streams: List[TimedStream]
    clocks: List[ClockStats]
    result: EngineResult
    output: TimedStream
    report: SimulationReport
    artifacts: Dict[str, Path] = field(default_factory=dict)


def simulate(config: ScenarioConfig) -> ScenarioRun:
    """
    Runs a scenario without touching the filesystem (except input dumps).

    Args:
        config: A validated scenario.

    Returns:
        The ScenarioRun.

    Raises:
        ConfigError: If a component name or parameter is invalid.
        ArtifactIOError: If an input dump cannot be read.
    """
    started = time.perf_counter()
    logging.info(f"Runner: scenario '{config.name}' started ({config.engine} engine).")
    streams = [build_stream(config, index) for index in range(config.channel_count)]
    clocks = measure_streams(streams, config.measurement_window)
    reference_channel = select_reference(config.reference, clocks)

    operator = create_operator(config.operator, config.channel_count, **dict(config.operator_params))
    result = ENGINES[config.engine](
        streams,
        reference_channel,
        operator,
        fill_byte=config.fill_byte,
        include_priming=config.include_priming,
        keep_trace=config.outputs.trace,
    )

    reference = streams[reference_channel]
    first_frame = result.output_frame_indices[0] if result.output_frame_indices else 0
    output = encode_output(
        result.output_frames,
        reference.model,
        config.geometry,
        first_edge=first_frame * config.geometry.bytes_per_frame + reference.edge_offset,
    )

    ids = [stream.source_id for stream in streams]
    offsets = result.trace.offset_stats() if result.trace else {}
    report = SimulationReport(
        scenario=config.name,
        geometry=config.geometry_name,
        engine=config.engine,
        seed=config.seed,
        operator=config.operator,
        reference_policy=str(config.reference),
        reference_channel=reference_channel,
        sources=[describe_source(stream, stats) for stream, stats in zip(streams, clocks)],
        violation_count=result.violation_count,
        first_violation_units=result.trace.first_violation_units if result.trace else None,
        checked_ticks=result.trace.ticks if result.trace else 0,
        temporal_offsets={ids[channel]: stats.to_dict() for channel, stats in offsets.items()},
        output_frame_count=len(result.output_frames),
        first_output_frame=result.output_frame_indices[0] if result.output_frame_indices else None,
        priming_frames=result.priming_frames,
        incomplete_runs=result.incomplete_runs,
        reference_frame_starts=result.reference_frame_starts,
        primed_at_units={ids[channel]: units for channel, units in sorted(result.primed_at_units.items())},
        event_count=result.event_count,
    )
    report.wall_clock_s = round(time.perf_counter() - started, 3)
    logging.info(f"Runner: scenario '{config.name}' finished in {report.wall_clock_s:.2f} s "
                 f"({report.violation_count} violation(s)).")
    return ScenarioRun(config, streams, clocks, result, output, report)


def write_artifacts(run: ScenarioRun, out_dir: Union[str, Path]) -> Dict[str, Path]:
    """
    Writes the requested artifacts of a finished run.

    Raises:
        ArtifactIOError: If the directory or a file cannot be written.
    """
    outputs = run.config.outputs
    root = ensure_directory(out_dir)
    written: Dict[str, Path] = {}
    if outputs.dump:
        written["output"] = write_dump(root / f"output{STREAM_DUMP_SUFFIX}", run.output.data)
    if outputs.report:
        written["report"] = write_text_atomic(root / "report.json", run.report.to_json(outputs.include_timing))
    if outputs.trace and run.result.trace is not None:
        written["trace"] = write_text_atomic(root / "trace.csv", format_trace_csv(run.result.trace))
    if outputs.inputs:
        inputs = ensure_directory(root / "inputs")
        for stream in run.streams:
            written[f"input:{stream.source_id}"] = write_dump(inputs / f"{stream.source_id}{STREAM_DUMP_SUFFIX}",
                                                              stream.data)
    if outputs.frames:
        frames = ensure_directory(root / "frames")
        for frame, number in list(zip(run.result.output_frames, run.result.output_frame_indices))[: outputs.frames]:
            written[f"pgm:{number}"] = export_pgm(frame, frames / f"frame_{number:05d}.pgm")
            written[f"ppm:{number}"] = export_ppm(frame, frames / f"frame_{number:05d}.ppm")
    run.artifacts.update(written)
    logging.info(f"Runner: {len(written)} artifact(s) written to {root}.")
    return written


def run_scenario(config: ScenarioConfig, out_dir: Optional[Union[str, Path]] = None) -> ScenarioRun:
    """
    Simulates a scenario and, when ``out_dir`` is given, writes its artifacts.

    Returns:
        The ScenarioRun (its ``report`` is the SimulationReport).
    """
    run = simulate(config)
    if out_dir is not None:
        write_artifacts(run, out_dir)
    return run
