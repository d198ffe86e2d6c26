import math

import numpy as np
import pytest

from src.clocks.drift import ConstantDrift, SinusoidalDrift
from src.pipeline.content import create_content
from src.pipeline.engine import run_batch
from src.pipeline.event_loop import run_event_loop
from src.pipeline.operators import create_operator
from tests.helpers import make_streams

# Desk frame period in phase units (20480 bytes at 27 MHz).
DESK_FRAME_UNITS = 20480 * 10 ** 9


def observable(result):
    offsets = result.trace.offset_stats()
    return (
        [frame.data.tolist() for frame in result.output_frames],
        result.output_frame_indices,
        result.priming_frames,
        result.incomplete_runs,
        result.reference_frame_starts,
        result.primed_at_units,
        result.violation_count,
        result.trace.first_violation_units,
        result.trace.ticks,
        offsets,
        result.event_count,
    )


@pytest.mark.parametrize("drifts, delays, reference", [
    ([None, None], [0, 0], 0),
    ([None, ConstantDrift(100)], [0, DESK_FRAME_UNITS * 2 // 5], 0),
    ([SinusoidalDrift(100, 0.001), ConstantDrift(-100)], [DESK_FRAME_UNITS // 3, 0], 1),
    ([None, ConstantDrift(60), ConstantDrift(-60)], [DESK_FRAME_UNITS, 12_345_000, 0], 2),
])
def test_batch_engine_matches_the_event_loop(desk, drifts, delays, reference):
    streams = make_streams(desk, drifts, delays, frame_count=3)
    operator = create_operator("average", len(streams))
    batch = run_batch(streams, reference, operator, keep_trace=True)
    event = run_event_loop(streams, reference, operator, keep_trace=True)
    assert observable(batch) == observable(event)
    assert batch.trace.rows == event.trace.rows


def test_include_priming_outputs_every_complete_reference_frame(desk):
    streams = make_streams(desk, [None, None], [0, DESK_FRAME_UNITS // 2], frame_count=3)
    operator = create_operator("passthrough", 2)
    skipped = run_batch(streams, 0, operator)
    kept = run_batch(streams, 0, operator, include_priming=True)
    assert len(kept.output_frames) == len(skipped.output_frames) + skipped.priming_frames
    assert kept.violation_count == skipped.violation_count


def test_equal_clocks_with_passthrough_reproduce_the_reference(desk):
    streams = make_streams(desk, [None, None], [0, 0], frame_count=4)
    result = run_batch(streams, 0, create_operator("passthrough", 2))
    content = create_content("gradient", desk)
    assert result.output_frame_indices == [1, 2, 3]
    assert result.priming_frames == 1
    for frame, number in zip(result.output_frames, result.output_frame_indices):
        np.testing.assert_array_equal(frame.data, content(number).data)


def test_a_channel_that_never_primes_only_yields_fill(desk):
    # The second channel starts so late that none of its frames completes in time.
    streams = make_streams(desk, [None, None], [0, 10 * DESK_FRAME_UNITS], frame_count=2)
    result = run_batch(streams, 0, create_operator("average", 2), fill_byte=0x10)
    assert result.output_frames == []
    assert result.priming_frames == 2
    assert result.violation_count == 0


def test_engines_reject_mismatched_inputs(desk, ntsc):
    desk_stream = make_streams(desk, [None], [0], frame_count=1)[0]
    ntsc_stream = make_streams(ntsc, [None], [0], frame_count=1)[0]
    with pytest.raises(ValueError):
        run_batch([desk_stream, ntsc_stream], 0, create_operator("average", 2))
    with pytest.raises(ValueError):
        run_batch([desk_stream], 1, create_operator("average", 1))


@pytest.mark.slow
def test_drifting_channels_stay_aligned_for_300_frames(desk):
    drifts = [None, SinusoidalDrift(100, 0.05)]
    delays = [0, DESK_FRAME_UNITS * 2 // 5]
    streams = make_streams(desk, drifts, delays, frame_count=300)
    result = run_batch(streams, 0, create_operator("average", 2))
    assert result.violation_count == 0
    assert result.trace.ticks == 300 * desk.active_bytes_per_frame
    offsets = result.trace.offset_stats()[1]
    bound = math.ceil(max(delays) / DESK_FRAME_UNITS) + 1
    assert max(abs(offsets.minimum), abs(offsets.maximum)) <= bound
    assert offsets.maximum - offsets.minimum <= 1


@pytest.mark.parametrize("delay_frames", [0.25, 1.0, 1.9])
def test_temporal_offset_stays_within_the_delay_bound(desk, delay_frames):
    delay = int(delay_frames * DESK_FRAME_UNITS) // 27_000 * 27_000
    streams = make_streams(desk, [ConstantDrift(-100), ConstantDrift(100)], [0, delay], frame_count=12)
    result = run_batch(streams, 0, create_operator("average", 2))
    offsets = result.trace.offset_stats()[1]
    bound = math.ceil(delay / DESK_FRAME_UNITS) + 1
    assert max(abs(offsets.minimum), abs(offsets.maximum)) <= bound
    assert result.violation_count == 0
