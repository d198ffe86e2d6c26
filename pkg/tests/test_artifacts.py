import os

import pytest

from src.core.artifacts import ensure_directory, read_bytes, read_text, write_bytes_atomic, write_text_atomic
from src.core.errors import ArtifactIOError


def test_atomic_write_leaves_no_temporary_files(tmp_path):
    target = write_bytes_atomic(tmp_path / "nested" / "out.656", b"\xff\x00\x00\x80")
    assert read_bytes(target) == b"\xff\x00\x00\x80"
    assert os.listdir(tmp_path / "nested") == ["out.656"]


def test_text_round_trip(tmp_path):
    write_text_atomic(tmp_path / "report.json", "{}\n")
    assert read_text(tmp_path / "report.json") == "{}\n"


def test_missing_file_raises_artifact_error(tmp_path):
    with pytest.raises(ArtifactIOError) as info:
        read_bytes(tmp_path / "absent.656")
    assert "absent.656" in str(info.value)


def test_directory_under_a_file_cannot_be_created(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ArtifactIOError):
        ensure_directory(blocker / "out")
