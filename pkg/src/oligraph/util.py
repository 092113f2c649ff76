"""Small shared helpers: hashing, atomic file writes, stable serialization."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def atomic_write_text(path, text: str) -> None:
    """Write via temp file + rename so readers never see partial content."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def csv_text(header, rows) -> str:
    """Render rows as CSV with fixed '\n' line endings (byte-stable output)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def atomic_write_csv(path, header, rows) -> None:
    atomic_write_text(path, csv_text(header, rows))


def fmt(value):
    """Stable cell formatting: floats via repr, None as empty string."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value
