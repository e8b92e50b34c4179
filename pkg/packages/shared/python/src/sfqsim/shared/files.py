"""Atomic file output and checked reads of user-supplied files."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from sfqsim.shared.errors import InputFileError


def atomic_write_bytes(path: Path, data: bytes) -> Path:
    """Write ``data`` to a temporary sibling of ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temporary = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(temporary, path)
    except BaseException:
        Path(temporary).unlink(missing_ok=True)
        raise
    return path


def atomic_write_text(path: Path, text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))


def read_input_bytes(path: Path, what: str = "input file") -> bytes:
    """Read a user-supplied file, reporting OS failures as ``InputFileError``."""
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputFileError(
            f"cannot read {what} {path}: {exc.strerror or exc}", path=str(path), what=what
        ) from exc
