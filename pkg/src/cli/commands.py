# =============================================================
# File: commands.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-30
# Refactored: 2026-02-05
# Description:
#     Command-line front end. One subcommand per invocation:
#     simulate, analyze-clocks, inspect, verify and power. Every
#     handler returns an exit code; exceptions are mapped to codes
#     in `run`.
# =============================================================

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src.core.artifacts import ensure_directory, read_text
from src.core.config import (
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    GEOMETRY_PROFILES,
)
from src.core.errors import (
    ArtifactIOError,
    ConfigError,
    GeometryError,
    MeasurementError,
    OperatorError,
    PowerBudgetError,
    TraceFormatError,
)
from src.core.scenario import ScenarioConfig, load_scenario
from src.pipeline.report import SimulationReport, describe_source, format_summary, startup_deltas
from src.pipeline.scenario_runner import build_stream, measure_streams, run_scenario
from src.pipeline.stages import interface_decode
from src.power.budget import case_study_budget, format_budget, load_budget
from src.sync.trace import VerificationResult, parse_trace_csv, verify_dumps, verify_trace
from src.video.geometry import FrameGeometry
from src.video.image_export import export_pgm, export_ppm, read_dump

USAGE_ERRORS = (ConfigError, GeometryError, OperatorError, PowerBudgetError, MeasurementError)
IO_ERRORS = (ArtifactIOError, TraceFormatError, OSError)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def configure_logging(level: str = "WARNING") -> None:
    """Root logger setup, once per process."""
    logging.basicConfig(level=getattr(logging, level), format='%(asctime)s - %(levelname)s - %(message)s',
                        force=True)


def _csv(rows: List[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    if rows:
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buffer.getvalue().rstrip("\n")


def _plural(count: int, word: str) -> str:
    return f"{count} {word}" if count == 1 else f"{count} {word}s"


def _configs(args: argparse.Namespace) -> List[ScenarioConfig]:
    if not args.config:
        raise ConfigError("--config", "a scenario file is required")
    return [load_scenario(path, seed=args.seed, geometry=args.geometry) for path in args.config]


# =============================================================
# simulate
# =============================================================
def _simulate_one(job: Tuple[ScenarioConfig, str]) -> SimulationReport:
    config, out_dir = job
    return run_scenario(config, out_dir).report


def cmd_simulate(args: argparse.Namespace) -> int:
    """Runs each scenario; exits 1 if any run reports alignment violations."""
    configs = _configs(args)
    out = Path(args.out)
    if len(configs) == 1:
        jobs = [(configs[0], str(out))]
    else:
        jobs = [(config, str(out / config.name)) for config in configs]
    ensure_directory(out)

    if args.jobs > 1 and len(jobs) > 1:
        logging.info(f"CLI: running {len(jobs)} scenarios on {args.jobs} workers.")
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_simulate_one, jobs))
    else:
        reports = [_simulate_one(job) for job in jobs]

    if args.format == "json":
        payload = [report.to_dict(config.outputs.include_timing) for report, (config, _) in zip(reports, jobs)]
        print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
    elif args.format == "csv":
        print(_csv([{
            "scenario": report.scenario,
            "reference": report.reference_id,
            "output_frames": report.output_frame_count,
            "priming_frames": report.priming_frames,
            "violations": report.violation_count,
            "events": report.event_count,
        } for report in reports]))
    else:
        for report, (_, out_dir) in zip(reports, jobs):
            print(format_summary(report))
            print(f"artifacts: {out_dir}")
    return EXIT_VERIFICATION_FAILED if any(report.violation_count for report in reports) else EXIT_OK


# =============================================================
# analyze-clocks
# =============================================================
def cmd_analyze_clocks(args: argparse.Namespace) -> int:
    """Per-source clock statistics and pairwise startup deltas."""
    for config in _configs(args):
        streams = [build_stream(config, index) for index in range(config.channel_count)]
        clocks = measure_streams(streams, config.measurement_window)
        sources = [describe_source(stream, stats) for stream, stats in zip(streams, clocks)]
        deltas = startup_deltas(sources)

        if args.format == "json":
            print(json.dumps({
                "scenario": config.name,
                "window": config.measurement_window,
                "sources": [source.to_dict() for source in sources],
                "startup_deltas": deltas,
            }, indent=2))
        elif args.format == "csv":
            rows = []
            for source in sources:
                row = {"scenario": config.name, "id": source.id, **source.clock.to_dict()}
                row["first_frame_start_ns"] = source.to_dict()["first_frame_start_ns"]
                rows.append(row)
            print(_csv(rows))
        else:
            print(f"scenario {config.name} ({config.measurement_window}-edge windows)")
            for source in sources:
                stats = source.clock
                print(f"  {source.id}: min {stats.min_hz:.3f} Hz ({stats.ppm(stats.min_hz):+.3f} ppm), "
                      f"mean {stats.mean_hz:.3f} Hz, max {stats.max_hz:.3f} Hz ({stats.ppm(stats.max_hz):+.3f} ppm)")
            for delta in deltas:
                print(f"  startup {delta['from']} -> {delta['to']}: {delta['delta_ns']} ns")
    return EXIT_OK


# =============================================================
# inspect
# =============================================================
def cmd_inspect(args: argparse.Namespace) -> int:
    """Decodes a dump; optionally exports its first frames as PGM/PPM."""
    geometry = FrameGeometry.profile(args.geometry or "ntsc")
    result = interface_decode(read_dump(args.dump), geometry)
    frames = result.complete_frames
    incomplete = len(result.frames) - len(frames)

    exported: List[str] = []
    if args.export:
        target = ensure_directory(args.out)
        stem = Path(args.dump).stem
        for number, frame in enumerate(frames[: args.export]):
            exported.append(str(export_pgm(frame, target / f"{stem}_{number:05d}.pgm")))
            exported.append(str(export_ppm(frame, target / f"{stem}_{number:05d}.ppm")))

    if args.format == "json":
        print(json.dumps({
            "frames": len(frames),
            "incomplete_frames": incomplete,
            "codes": len(result.codes),
            "warnings": [{"offset": warning.offset, "message": warning.message} for warning in result.warnings],
            "exported": exported,
        }, indent=2))
    elif args.format == "csv":
        print(_csv([{"offset": warning.offset, "message": warning.message} for warning in result.warnings]))
    else:
        summary = f"{_plural(len(frames), 'frame')}, {len(result.codes)} codes, {len(result.warnings)} warnings"
        if incomplete:
            summary += f" ({incomplete} incomplete)"
        print(summary)
        for warning in result.warnings:
            print(f"  warning at offset {warning.offset}: {warning.message}")
        for path in exported:
            print(f"  exported {path}")
    return EXIT_OK


# =============================================================
# verify
# =============================================================
def cmd_verify(args: argparse.Namespace) -> int:
    """Checks a trace CSV or a pair of dumps; exits 1 on any violation."""
    if args.trace:
        outcome: VerificationResult = verify_trace(parse_trace_csv(read_text(args.trace)))
    else:
        outcome = verify_dumps(read_dump(args.dumps[0]), read_dump(args.dumps[1]))

    if args.format == "json":
        print(json.dumps({"checked": outcome.checked, "violation_count": outcome.violation_count,
                          "first_violation": outcome.first_violation}, indent=2))
    elif args.format == "csv":
        print(_csv([{"checked": outcome.checked, "violation_count": outcome.violation_count,
                     "first_violation": outcome.first_violation or ""}]))
    else:
        line = f"{_plural(outcome.violation_count, 'violation')} in {outcome.checked} checked"
        if outcome.first_violation:
            line += f", first at {outcome.first_violation}"
        print(line)
    return EXIT_OK if outcome.ok else EXIT_VERIFICATION_FAILED


# =============================================================
# power
# =============================================================
def cmd_power(args: argparse.Namespace) -> int:
    """Power totals and LDO capacity; the built-in board without --config."""
    budget = load_budget(args.config[0]) if args.config else case_study_budget()
    if args.format == "json":
        print(json.dumps(budget.to_dict(), indent=2))
    elif args.format == "csv":
        print(_csv(budget.capacity_table()))
    else:
        print(format_budget(budget))
    return EXIT_OK


# =============================================================
# Parser and dispatch
# =============================================================
COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "simulate": cmd_simulate,
    "analyze-clocks": cmd_analyze_clocks,
    "inspect": cmd_inspect,
    "verify": cmd_verify,
    "power": cmd_power,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", action="append", metavar="PATH", help="scenario (or power budget) file")
    shared.add_argument("--out", default="out", metavar="DIR", help="artifact directory")
    shared.add_argument("--seed", type=int, help="override the scenario seed")
    shared.add_argument("--geometry", choices=sorted(GEOMETRY_PROFILES), help="override the frame geometry")
    shared.add_argument("--format", choices=["json", "csv"], help="machine-readable output")
    shared.add_argument("--log-level", default="WARNING", choices=LOG_LEVELS)

    parser = argparse.ArgumentParser(prog="multi-video-sync", description="Multi-video synchronization simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", parents=[shared], help="run scenarios and write artifacts")
    simulate.add_argument("--jobs", type=int, default=1, help="scenarios run in parallel")

    sub.add_parser("analyze-clocks", parents=[shared], help="clock statistics and startup deltas")

    inspect = sub.add_parser("inspect", parents=[shared], help="decode a .656 dump")
    inspect.add_argument("dump", help="stream dump")
    inspect.add_argument("--export", type=int, default=0, metavar="N", help="export the first N frames to --out")

    verify = sub.add_parser("verify", parents=[shared], help="check a trace or a pair of dumps")
    target = verify.add_mutually_exclusive_group(required=True)
    target.add_argument("--trace", metavar="CSV")
    target.add_argument("--dumps", nargs=2, metavar=("A", "B"))

    sub.add_parser("power", parents=[shared], help="LDO power budget")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parses ``argv`` and runs one subcommand.

    Returns:
        The exit code: 0 success, 1 violations found, 2 usage or
        configuration error, 3 I/O error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    configure_logging(args.log_level)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args)
    except USAGE_ERRORS as exc:
        logging.error(f"CLI: {args.command} failed: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IO_ERRORS as exc:
        logging.error(f"CLI: {args.command} failed: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
