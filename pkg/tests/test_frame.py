import numpy as np
import pytest

from src.core.errors import GeometryError
from src.video.frame import RawFrame


def test_data_is_clamped_to_the_data_range():
    frame = RawFrame(np.array([[0, 255, 7, 254]]))
    assert frame.data.tolist() == [[1, 254, 7, 254]]


def test_frames_are_read_only():
    frame = RawFrame.blank(4, 2)
    with pytest.raises(ValueError):
        frame.data[0, 0] = 3


def test_planes_interleave_as_cb_y_cr_y():
    luma = np.array([[10, 11, 12, 13]])
    frame = RawFrame.from_planes(luma, np.array([[20, 21]]), np.array([[30, 31]]))
    assert frame.data.tolist() == [[20, 10, 30, 11, 21, 12, 31, 13]]
    assert frame.luma.tolist() == luma.tolist()
    assert frame.cb.tolist() == [[20, 21]]
    assert frame.cr.tolist() == [[30, 31]]


def test_odd_width_is_rejected():
    with pytest.raises(GeometryError):
        RawFrame(np.zeros((2, 6)))


def test_equality_includes_field_parity():
    data = np.full((2, 4), 50)
    assert RawFrame(data) == RawFrame(data)
    assert RawFrame(data) != RawFrame(data, field_parity=[0, 0])
