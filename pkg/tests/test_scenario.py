import json
from fractions import Fraction

import pytest

from src.core.errors import ArtifactIOError, ConfigError
from src.core.scenario import load_scenario, parse_scenario
from src.sync.sync_module import ReferencePolicy
from tests.helpers import scenario_document, write_scenario


def test_minimal_scenario_gets_defaults():
    config = parse_scenario(scenario_document())
    assert config.channel_count == 2
    assert config.geometry_name == "desk"
    assert config.reference == ReferencePolicy("fixed", 0)
    assert config.operator == "passthrough" and config.engine == "batch"
    assert config.sources[0].nominal_hz == 27_000_000
    assert config.sources[1].drift.kind == "none"
    assert config.outputs.dump and config.outputs.report and not config.outputs.trace


def test_source_fields_are_parsed():
    config = parse_scenario(scenario_document(sources=[
        {"id": "vs", "drift": {"kind": "sinusoidal", "ppm": 100, "period_s": 0.5}},
        {"id": "nir", "nominal_hz": "27000000/1", "startup_delay_frames": 0.4,
         "content": {"name": "constant", "y": 200}},
    ], reference="slowest_clock", operator={"name": "passthrough", "channel": 1}))
    vs, nir = config.sources
    assert (vs.drift.kind, vs.drift.ppm, vs.drift.period_s) == ("sinusoidal", 100.0, 0.5)
    assert nir.startup_delay_units == 8_192_000_000_000
    assert nir.startup_delay_ns == Fraction(8_192_000_000_000, 27_000_000)
    assert nir.content == "constant" and nir.content_params == (("y", 200),)
    assert config.reference.kind == "slowest_clock"
    assert config.operator_params == (("channel", 1),)


def test_delay_in_ns_is_rounded_to_the_phase_grid():
    config = parse_scenario(scenario_document(sources=[{"id": "a", "startup_delay_ns": 1.5}]))
    assert config.sources[0].startup_delay_units == 40_500_000


@pytest.mark.parametrize("overrides, field", [
    ({"schema": 2}, "schema"),
    ({"colour": "red"}, "colour"),
    ({"sources": []}, "sources"),
    ({"sources": [{"id": "a"}, {"id": "a"}]}, "sources"),
    ({"sources": [{"id": "a", "speed": 1}]}, "sources[0].speed"),
    ({"sources": [{"id": "a", "drift": {"kind": "chaotic"}}]}, "sources[0].drift.kind"),
    ({"sources": [{"id": "a", "drift": {"kind": "sinusoidal", "period_s": 0}}]}, "sources[0].drift.period_s"),
    ({"sources": [{"id": "a", "startup_delay_ns": -1}]}, "sources[0].startup_delay_ns"),
    ({"sources": [{"id": "a", "startup_delay_ns": 1, "startup_delay_frames": 1}]}, "sources[0].startup_delay_ns"),
    ({"sources": [{"id": "a", "nominal_hz": 0}]}, "sources[0].nominal_hz"),
    ({"sources": [{"id": "a", "content": "bars"}]}, "sources[0].content"),
    ({"reference": "fixed(2)"}, "reference"),
    ({"reference": "fastest"}, "reference"),
    ({"operator": "median"}, "operator"),
    ({"engine": "gpu"}, "engine"),
    ({"frame_count": 0}, "frame_count"),
    ({"frame_count": True}, "frame_count"),
    ({"geometry": "pal"}, "geometry"),
    ({"geometry": "ntsc", "frame_count": 10_000}, "frame_count"),
    ({"fill_byte": 0}, "fill_byte"),
    ({"outputs": {"frames": -1}}, "outputs.frames"),
])
def test_invalid_scenarios_name_the_offending_field(overrides, field):
    with pytest.raises(ConfigError) as info:
        parse_scenario(scenario_document(**overrides))
    assert info.value.field == field


def test_startup_delay_counts_towards_the_run_length_limit():
    # 7000 NTSC frames last about 233.6 s.
    assert parse_scenario(scenario_document(geometry="ntsc", frame_count=7000)).frame_count == 7000
    late = [{"id": "vs"}, {"id": "nir", "startup_delay_ns": 120_000_000_000}]
    with pytest.raises(ConfigError, match="startup delays") as info:
        parse_scenario(scenario_document(sources=late, geometry="ntsc", frame_count=7000))
    assert info.value.field == "frame_count"


@pytest.mark.parametrize("drift, accepted", [
    ({"kind": "none"}, True),
    ({"kind": "constant", "ppm": -200_000}, False),
    ({"kind": "sinusoidal", "ppm": 200_000, "period_s": 1}, False),
])
def test_slow_drift_counts_towards_the_run_length_limit(drift, accepted):
    # 8000 NTSC frames last about 266.9 s at the nominal rate.
    document = scenario_document(sources=[{"id": "vs", "drift": drift}], geometry="ntsc", frame_count=8000)
    if accepted:
        assert parse_scenario(document).frame_count == 8000
    else:
        with pytest.raises(ConfigError, match="drift"):
            parse_scenario(document)


@pytest.mark.parametrize("drift, bound", [
    ({"kind": "none"}, 0.0),
    ({"kind": "constant", "ppm": -40}, 40.0),
    ({"kind": "random_walk"}, 100.0),
    ({"kind": "random_walk", "ppm": 25}, 25.0),
])
def test_drift_bound(drift, bound):
    config = parse_scenario(scenario_document(sources=[{"id": "vs", "drift": drift}]))
    assert config.sources[0].drift.bound_ppm == bound


def test_custom_geometry_object():
    geometry = {"lines_total": 80, "samples_total": 128, "samples_active": 96, "lines_active_per_field": 32,
                "first_active_line": 5}
    config = parse_scenario(scenario_document(geometry=geometry))
    assert config.geometry_name == "custom"
    assert config.geometry.bytes_per_frame == 20480


def test_inconsistent_custom_geometry_is_a_config_error():
    with pytest.raises(ConfigError):
        parse_scenario(scenario_document(geometry={"lines_total": 80, "samples_total": 64, "samples_active": 96}))


def test_load_applies_command_line_overrides(tmp_path):
    path = write_scenario(tmp_path)
    config = load_scenario(path, seed=99, geometry="ntsc")
    assert config.seed == 99
    assert config.geometry_name == "ntsc"


def test_geometry_override_is_applied_before_validation(tmp_path):
    path = write_scenario(tmp_path, sources=[{"id": "vs", "startup_delay_frames": 1}])
    assert load_scenario(path).sources[0].startup_delay_units == 20480 * 10 ** 9
    assert load_scenario(path, geometry="ntsc").sources[0].startup_delay_units == 900900 * 10 ** 9


def test_input_dumps_resolve_next_to_the_scenario(tmp_path):
    path = write_scenario(tmp_path, sources=[{"id": "cam", "input_dump": "cam.656"}])
    assert load_scenario(path).sources[0].input_dump == tmp_path / "cam.656"


def test_invalid_json_is_a_config_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_scenario(path)


def test_missing_file_is_an_io_error(tmp_path):
    with pytest.raises(ArtifactIOError):
        load_scenario(tmp_path / "absent.json")


def test_documents_round_trip_through_json(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(scenario_document(seed=3)))
    assert load_scenario(path) == parse_scenario(scenario_document(seed=3), tmp_path)
