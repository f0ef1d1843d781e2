"""
This module provides atomic file output and content hashing.
"""

import hashlib
import logging
import os
import tempfile
from typing import Union

PathLike = Union[str, "os.PathLike[str]"]


def atomic_write_text(path: PathLike, text: str) -> None:
    """
    Write text to a file so readers never observe a partial file.

    The content goes to a temporary file in the destination directory which
    is then renamed over the target.

    Args:
        path: Destination path.
        text: Content to write, encoded as UTF-8 with '\\n' line endings.
    """
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logging.debug(f"Wrote {len(text)} characters to {path}")


def sha256_file(path: PathLike) -> str:
    """
    Compute the SHA-256 hex digest of a file.

    Args:
        path: File to hash.

    Returns:
        The lowercase hex digest.
    """
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
