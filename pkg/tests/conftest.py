import pytest

from src.video.geometry import FrameGeometry


@pytest.fixture
def desk() -> FrameGeometry:
    return FrameGeometry.profile("desk")


@pytest.fixture
def ntsc() -> FrameGeometry:
    return FrameGeometry.profile("ntsc")
