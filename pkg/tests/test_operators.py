import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st
from hypothesis.extra.numpy import arrays

from src.core.errors import ConfigError, OperatorError
from src.pipeline.base_operator import Sample
from src.pipeline.operators import create_operator
from src.pipeline.stages import apply_pixel_operator


def test_passthrough_forwards_channel_zero():
    operator = create_operator("passthrough", 2)
    assert apply_pixel_operator(operator, [(100, 37), (200, 90)]) == Sample(100, 37)


def test_passthrough_can_pick_another_channel():
    operator = create_operator("passthrough", 3, channel=2)
    assert apply_pixel_operator(operator, [(1, 2), (3, 4), (50, 60)]) == Sample(50, 60)
    with pytest.raises(OperatorError):
        create_operator("passthrough", 2, channel=2)


def test_average_rounds_to_nearest():
    operator = create_operator("average", 2)
    assert apply_pixel_operator(operator, [(100, 37), (200, 90)]) == Sample(150, 64)


def test_luma_max_keeps_channel_zero_chroma():
    operator = create_operator("luma_max", 2)
    assert apply_pixel_operator(operator, [(120, 90), (200, 30)]) == Sample(200, 90)


def test_arity_mismatch():
    operator = create_operator("average", 2)
    with pytest.raises(OperatorError):
        apply_pixel_operator(operator, [(1, 1), (2, 2), (3, 3)])
    with pytest.raises(OperatorError):
        operator.apply_streams(np.zeros((3, 4), dtype=np.uint8), np.array([False, True] * 2))


def test_outputs_never_leave_the_data_range():
    operator = create_operator("luma_max", 1)
    streams = np.array([[0x00, 0xFF, 0x7F, 0xFF]], dtype=np.uint8)
    out = operator.apply_streams(streams, np.array([False, True, False, True]))
    assert out.tolist() == [0x01, 0xFE, 0x7F, 0xFE]


def test_unknown_operator():
    with pytest.raises(ConfigError):
        create_operator("median", 2)
    with pytest.raises(OperatorError):
        create_operator("average", 0)


def operator_inputs():
    """An operator name, its arity and K aligned streams of (Cb/Cr, Y) byte pairs."""
    return st.tuples(st.sampled_from(["passthrough", "average", "luma_max"]), st.integers(1, 4),
                     st.integers(1, 32)).flatmap(
        lambda args: st.tuples(st.just(args[0]), arrays(np.uint8, (args[1], 2 * args[2]),
                                                        elements=st.integers(0, 255)))
    )


@settings(max_examples=200, deadline=None)
@given(operator_inputs())
def test_stream_output_matches_pixel_by_pixel_application(case):
    name, streams = case
    operator = create_operator(name, streams.shape[0])
    luma_mask = np.arange(streams.shape[1]) % 2 == 1
    out = operator.apply_streams(streams, luma_mask)
    for pixel in range(streams.shape[1] // 2):
        chroma, luma = 2 * pixel, 2 * pixel + 1
        expected = apply_pixel_operator(operator, zip(streams[:, luma].tolist(), streams[:, chroma].tolist()))
        assert (int(out[luma]), int(out[chroma])) == expected


@settings(max_examples=200, deadline=None)
@given(operator_inputs(), st.data())
def test_changing_one_byte_leaves_every_other_output_byte_alone(case, data):
    name, streams = case
    operator = create_operator(name, streams.shape[0])
    luma_mask = np.arange(streams.shape[1]) % 2 == 1
    channel = data.draw(st.integers(0, streams.shape[0] - 1))
    column = data.draw(st.integers(0, streams.shape[1] - 1))
    changed = streams.copy()
    changed[channel, column] = data.draw(st.integers(0, 255))
    before = operator.apply_streams(streams, luma_mask)
    after = operator.apply_streams(changed, luma_mask)
    others = np.arange(streams.shape[1]) != column
    np.testing.assert_array_equal(before[others], after[others])
