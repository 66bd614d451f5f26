"""Write-then-rename helpers so a killed run never leaves a truncated file."""

from __future__ import annotations

import contextlib
import os
import tempfile
from collections.abc import Iterator
from pathlib import Path

from shared.exceptions import OutputError


@contextlib.contextmanager
def atomic_path(target: Path | str, suffix: str = "") -> Iterator[Path]:
    """Yield a temporary path next to ``target``; it replaces ``target`` when the block succeeds.

    Raises:
        OutputError: the directory cannot be created or the file cannot be moved into place.
    """
    target = Path(target)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=f"{suffix}.tmp", dir=target.parent)
        os.close(fd)
    except OSError as exc:
        raise OutputError(f"cannot write {target}: {exc}") from exc

    temp = Path(name)
    try:
        yield temp
        os.replace(temp, target)
    except OSError as exc:
        raise OutputError(f"cannot write {target}: {exc}") from exc
    finally:
        temp.unlink(missing_ok=True)


def write_text_atomic(target: Path | str, text: str) -> Path:
    with atomic_path(target) as temp:
        temp.write_text(text, encoding="utf-8", newline="\n")
    return Path(target)
