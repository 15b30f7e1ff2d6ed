from __future__ import annotations

import contextlib
from pathlib import Path


@contextlib.contextmanager
def text_out(target):
    """Yield a writable text stream for a path or an already open stream."""
    if hasattr(target, "write"):
        yield target
        return
    try:
        fh = Path(target).open("w", newline="")
    except OSError as exc:
        raise OSError(f"cannot write to {target}: {exc}") from exc
    with fh:
        yield fh
