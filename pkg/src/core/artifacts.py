# =============================================================
# File: artifacts.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-28
# Description:
#     Atomic artifact writing (write to a temporary sibling, then
#     rename) and checked reading. Every OSError is re-raised as
#     ArtifactIOError so the CLI can map it to its I/O exit code.
# =============================================================

import logging
import os
import tempfile
from pathlib import Path
from typing import Union

from src.core.errors import ArtifactIOError

PathLike = Union[str, Path]


def ensure_directory(path: PathLike) -> Path:
    """
    Creates ``path`` (and parents) if needed.

    Raises:
        ArtifactIOError: If the directory cannot be created or is not writable.
    """
    directory = Path(path)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ArtifactIOError(str(directory), exc.strerror or str(exc)) from exc
    if not os.access(directory, os.W_OK):
        raise ArtifactIOError(str(directory), "directory is not writable")
    return directory


def write_bytes_atomic(path: PathLike, data: Union[bytes, bytearray, memoryview]) -> Path:
    """
    Writes ``data`` to ``path`` atomically.

    Args:
        path: Destination file.
        data: Payload.

    Returns:
        The destination path.

    Raises:
        ArtifactIOError: On any filesystem failure.
    """
    target = Path(path)
    directory = ensure_directory(target.parent if str(target.parent) else ".")
    tmp_name = None
    try:
        with tempfile.NamedTemporaryFile(dir=directory, prefix=f".{target.name}.", delete=False) as handle:
            tmp_name = handle.name
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, target)
    except OSError as exc:
        if tmp_name and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise ArtifactIOError(str(target), exc.strerror or str(exc)) from exc
    logging.info(f"Artifacts: wrote {len(data)} bytes to {target}.")
    return target


def write_text_atomic(path: PathLike, text: str) -> Path:
    """Writes UTF-8 text atomically (see ``write_bytes_atomic``)."""
    return write_bytes_atomic(path, text.encode("utf-8"))


def read_bytes(path: PathLike) -> bytes:
    """
    Reads a whole file.

    Raises:
        ArtifactIOError: If the file cannot be read.
    """
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ArtifactIOError(str(path), exc.strerror or str(exc)) from exc


def read_text(path: PathLike) -> str:
    """Reads a UTF-8 text file, mapping failures to ArtifactIOError."""
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ArtifactIOError(str(path), str(exc)) from exc
