import logging

import numpy as np
import pytest

from src.clocks.clock_model import ClockModel
from src.clocks.drift import ConstantDrift
from src.clocks.source import derive_seed, generate_source, stream_from_dump
from src.core.config import SEED_PURPOSE_CONTENT, SEED_PURPOSE_DRIFT
from src.core.sim_time import SimTime
from src.pipeline.content import create_content
from src.video.geometry import Region, locate


def test_one_ntsc_frame_is_900900_timed_bytes(ntsc):
    stream = generate_source("vs", ClockModel(), ntsc, create_content("constant", ntsc), 1)
    assert len(stream) == 900_900
    assert stream.frame_count == 1


def test_first_byte_fires_at_the_startup_delay(desk):
    model = ClockModel(startup_delay=SimTime.from_ns(250_000), step_edges=desk.bytes_per_line)
    stream = generate_source("nir", model, desk, create_content("gradient", desk), 2)
    assert stream.first_time == SimTime.from_ns(250_000)
    assert stream[0].time == SimTime.from_ns(250_000)


def test_timed_bytes_carry_value_and_provenance(desk):
    model = ClockModel(drift=ConstantDrift(30), step_edges=desk.bytes_per_line)
    stream = generate_source("vs", model, desk, create_content("noise", desk, seed=5), 2)
    for offset in (0, 61, 4 * 256 + 70, 20480 + 300, len(stream) - 1):
        timed = stream[offset]
        assert timed.value == int(stream.data[offset])
        assert timed.provenance[1:] == tuple(locate(desk, offset))
        assert timed.provenance.source_id == "vs"
        assert timed.time.units == model.edge_unit(offset)


def test_stream_times_increase(desk):
    model = ClockModel(drift=ConstantDrift(-80), step_edges=desk.bytes_per_line)
    stream = generate_source("vs", model, desk, create_content("constant", desk), 1)
    assert np.all(np.diff(stream.time_units()) > 0)
    assert stream.end_units == model.edge_unit(len(stream) - 1)


def test_stream_data_is_read_only(desk):
    stream = generate_source("vs", ClockModel(), desk, create_content("constant", desk), 1)
    with pytest.raises(ValueError):
        stream.data[0] = 1
    with pytest.raises(IndexError):
        stream[len(stream)]


def test_frame_count_must_be_positive(desk):
    with pytest.raises(ValueError):
        generate_source("vs", ClockModel(), desk, create_content("constant", desk), 0)


def test_derived_seeds_are_stable_and_distinct():
    assert derive_seed(7, 0, SEED_PURPOSE_DRIFT) == derive_seed(7, 0, SEED_PURPOSE_DRIFT)
    assert derive_seed(7, 0, SEED_PURPOSE_DRIFT) != derive_seed(7, 1, SEED_PURPOSE_DRIFT)
    assert derive_seed(7, 0, SEED_PURPOSE_DRIFT) != derive_seed(7, 0, SEED_PURPOSE_CONTENT)


def test_partial_dump_is_accepted_with_a_warning(desk, caplog):
    with caplog.at_level(logging.WARNING):
        stream = stream_from_dump("cam", ClockModel(), desk, np.full(desk.bytes_per_frame + 10, 0x10, dtype=np.uint8))
    assert len(stream) == desk.bytes_per_frame + 10
    assert "not a whole number of frames" in caplog.text


def test_first_byte_is_an_eav(desk):
    stream = generate_source("vs", ClockModel(), desk, create_content("constant", desk), 1)
    assert stream.provenance(0).region is Region.EAV
