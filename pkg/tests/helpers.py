import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.clocks.clock_model import ClockModel
from src.clocks.drift import DriftProfile, NoDrift
from src.clocks.source import TimedStream, generate_source
from src.core.sim_time import SimTime
from src.pipeline.content import create_content
from src.video.geometry import FrameGeometry


def scenario_document(sources: Optional[List[Dict[str, Any]]] = None, **overrides: Any) -> Dict[str, Any]:
    """A small valid desk scenario; keyword arguments replace top-level keys."""
    document: Dict[str, Any] = {
        "schema": 1,
        "name": "pair",
        "geometry": "desk",
        "frame_count": 4,
        "seed": 7,
        "sources": sources if sources is not None else [{"id": "vs"}, {"id": "nir"}],
    }
    document.update(overrides)
    return document


def write_scenario(directory: Path, filename: str = "scenario.json", **kwargs: Any) -> Path:
    path = Path(directory) / filename
    path.write_text(json.dumps(scenario_document(**kwargs)))
    return path


def make_stream(geometry: FrameGeometry, source_id: str = "s", frame_count: int = 3,
                drift: Optional[DriftProfile] = None, delay_units: int = 0, content: str = "gradient",
                seed: int = 1) -> TimedStream:
    model = ClockModel(drift=drift or NoDrift(), startup_delay=SimTime.from_units(delay_units),
                       step_edges=geometry.bytes_per_line)
    generator = create_content(content, geometry, seed=seed)
    return generate_source(source_id, model, geometry, generator, frame_count)


def make_streams(geometry: FrameGeometry, drifts: Sequence[Optional[DriftProfile]], delays: Sequence[int],
                 frame_count: int = 3, content: str = "gradient") -> List[TimedStream]:
    return [
        make_stream(geometry, f"ch{index}", frame_count, drift, delay, content, seed=index)
        for index, (drift, delay) in enumerate(zip(drifts, delays))
    ]
