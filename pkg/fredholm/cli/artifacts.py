"""Result files. Every write goes to a temporary file that is then renamed."""

import csv
import io
import json
import logging
import os
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

logger = logging.getLogger(__name__)


def format_float(value: Optional[float]) -> str:
    """Shortest decimal that round-trips; empty for missing values."""
    if value is None:
        return ""
    return repr(float(value))


def atomic_write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(path.name + ".tmp")
    with open(tmp_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    os.replace(tmp_path, path)
    logger.info(f"Wrote {path}")
    return path


def write_json(path: Path, payload: Any) -> Path:
    return atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Optional[float]]]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([cell if isinstance(cell, str) else format_float(cell) for cell in row])
    return atomic_write_text(path, buffer.getvalue())
