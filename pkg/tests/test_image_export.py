import numpy as np
from PIL import Image

from src.video.frame import RawFrame
from src.video.image_export import export_pgm, export_ppm, frame_to_rgb, read_dump, write_dump


def test_dump_round_trip(tmp_path):
    stream = np.arange(256, dtype=np.uint8)
    write_dump(tmp_path / "in.656", stream)
    assert read_dump(tmp_path / "in.656").tolist() == stream.tolist()


def test_studio_black_and_white_map_to_rgb_extremes():
    luma = np.array([[16, 16, 235, 235]])
    chroma = np.full((1, 2), 128)
    rgb = frame_to_rgb(RawFrame.from_planes(luma, chroma, chroma))
    assert rgb[0, 0].tolist() == [0, 0, 0]
    assert rgb[0, 3].tolist() == [255, 255, 255]


def test_exported_images_have_the_frame_size(tmp_path):
    frame = RawFrame.blank(96, 64)
    pgm = export_pgm(frame, tmp_path / "f.pgm")
    ppm = export_ppm(frame, tmp_path / "f.ppm")
    assert pgm.read_bytes().startswith(b"P5")
    assert ppm.read_bytes().startswith(b"P6")
    with Image.open(ppm) as image:
        assert image.size == (96, 64)
