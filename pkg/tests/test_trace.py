import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from src.core.errors import TraceFormatError
from src.sync.trace import (
    AlignmentTrace,
    TraceRow,
    format_trace_csv,
    is_violation,
    parse_trace_csv,
    temporal_offsets,
    verify_dumps,
    verify_trace,
)
from src.video.codec import encode_frames
from src.video.frame import RawFrame


def row(k: int, reference, *channels, violation=None) -> TraceRow:
    tags = (reference, *channels)
    flag = is_violation(reference, tags) if violation is None else violation
    return TraceRow(27_000 * k, reference, tags, flag)


def test_fill_bytes_never_count_as_violations():
    assert not is_violation((0, 20, 5), [(0, 20, 5), None])
    assert is_violation((0, 20, 5), [(0, 20, 5), (1, 20, 6)])
    assert not is_violation((0, 20, 5), [(3, 20, 5)])


def test_mode_ties_go_to_the_smaller_offset():
    trace = AlignmentTrace(2)
    for frame in (4, 4, 7, 7, 5):
        trace.add_row(row(0, (5, 20, 0), (frame, 20, 0)))
    stats = temporal_offsets(trace)[1]
    assert (stats.minimum, stats.maximum, stats.mode, stats.count) == (-1, 2, -1, 5)


def test_batch_and_row_accounting_agree():
    by_rows = AlignmentTrace(2)
    for frame in (3, 3, 4):
        by_rows.add_row(row(0, (3, 20, 0), (frame, 20, 0)))
    batched = AlignmentTrace(2)
    batched.add_offsets(1, np.array([0, 0, 1]))
    assert temporal_offsets(by_rows) == temporal_offsets(batched)


def test_first_violation_is_remembered():
    trace = AlignmentTrace(2)
    trace.add_row(row(1, (0, 20, 0), (0, 20, 0)))
    trace.add_row(row(2, (0, 20, 1), (0, 20, 9)))
    trace.add_row(row(3, (0, 20, 2), (0, 21, 2)))
    assert trace.violation_count == 2
    assert trace.first_violation_units == 54_000


def test_csv_round_trip():
    trace = AlignmentTrace(3, keep_rows=True)
    trace.add_row(row(1, (0, 20, 0), (0, 20, 0), None))
    trace.add_row(row(2, (1, 20, 1), (1, 20, 1), (0, 20, 1)))
    trace.add_row(row(3, (1, 20, 2), (1, 20, 2), (0, 21, 2)))
    text = format_trace_csv(trace)
    assert text.splitlines()[0].startswith("tick_units,tick_time_ns,ref_frame,ref_line,ref_sample,ch0_frame")
    assert parse_trace_csv(text) == trace.rows


@given(st.integers(0, 2 ** 63 - 1))
def test_csv_keeps_tick_times_exact(tick_units):
    trace = AlignmentTrace(2, keep_rows=True)
    trace.add_row(TraceRow(tick_units, (0, 20, 0), ((0, 20, 0), (0, 20, 0)), False))
    assert parse_trace_csv(format_trace_csv(trace))[0].tick_units == tick_units



@pytest.mark.parametrize("text", [
    "",
    "tick,frame\n",
    "tick_units,tick_time_ns,ref_frame,ref_line,ref_sample,ch0_frame,ch0_line,ch0_sample,violation\n27000000,1.000,0,20\n",
    "tick_units,tick_time_ns,ref_frame,ref_line,ref_sample,ch0_frame,ch0_line,ch0_sample,violation\nx,1.000,0,20,0,0,20,0,0\n",
])
def test_malformed_traces_are_rejected(text):
    with pytest.raises(TraceFormatError):
        parse_trace_csv(text)


def test_verify_reports_one_injected_misalignment():
    rows = [row(k, (0, 20, k), (0, 20, k)) for k in range(1, 50)]
    rows[30] = TraceRow(rows[30].tick_units, (0, 20, 31), ((0, 20, 31), (0, 20, 32)), False)
    result = verify_trace(rows)
    assert not result.ok
    assert result.violation_count == 1
    assert result.checked == 49
    assert result.first_violation == "tick 0.031 ns"


def test_verify_trusts_the_recorded_flag():
    rows = [row(1, (0, 20, 0), (0, 20, 0), violation=True)]
    assert verify_trace(rows).violation_count == 1


def test_verify_dumps(desk):
    frames = [RawFrame(np.full((64, 192), 77, dtype=np.uint8))] * 2
    stream = encode_frames(frames, desk)
    assert verify_dumps(stream, stream.copy()).ok
    shifted = np.concatenate([np.full(desk.bytes_per_line, 0x10, dtype=np.uint8), stream])
    result = verify_dumps(stream, shifted)
    assert result.violation_count > 0
    assert result.first_violation == "byte offset 0"
