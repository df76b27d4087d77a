"""CSV and JSON output module.

Tables are rendered with a header row, comma separators and ``repr`` floats,
which round-trip exactly and never depend on the locale. Files appear
atomically: content goes to a temporary file in the target directory, which
is then renamed over the destination.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from einsel.errors import ExportError, InvariantViolation

Row = Sequence[Any]


def format_value(value: Any) -> str:
    """Render one CSV cell.

    Floats use ``repr`` (shortest text that parses back to the same double);
    booleans and integers use their plain decimal form.

    Raises:
        InvariantViolation: For NaN or infinite values.
    """
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise InvariantViolation(f"Refusing to export non-finite value {value!r}")
        return repr(value)
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Row]) -> str:
    """Render a table to CSV text.

    Args:
        columns: Header names.
        rows: Row values, one entry per column.

    Returns:
        CSV text with ``\\n`` line endings.

    Raises:
        InvariantViolation: If a row has the wrong width or a non-finite value.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for number, row in enumerate(rows, start=1):
        if len(row) != len(columns):
            raise InvariantViolation(
                f"Row {number} has {len(row)} values for {len(columns)} columns"
            )
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def atomic_write(path: str | Path, text: str) -> Path:
    """Write text to path via a temporary sibling file and a rename.

    Args:
        path: Destination file; parent directories are created.
        text: Content, encoded as UTF-8.

    Returns:
        The destination path.

    Raises:
        ExportError: If any filesystem operation fails.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp_name, path)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
    except OSError as e:
        raise ExportError(
            f"Could not write {path}: {e.strerror or e}",
            suggestion="Check that the output directory exists and is writable.",
        ) from e
    return path


def write_csv(path: str | Path, columns: Sequence[str], rows: Iterable[Row]) -> Path:
    """Render and atomically write a CSV table."""
    return atomic_write(path, render_csv(columns, rows))


def write_summary(path: str | Path, summary: dict[str, Any]) -> Path:
    """Write summary.json with sorted keys.

    Raises:
        InvariantViolation: If the summary contains NaN or infinity.
        ExportError: If the file cannot be written.
    """
    try:
        text = json.dumps(summary, sort_keys=True, indent=2, allow_nan=False)
    except ValueError as e:
        raise InvariantViolation(f"Summary contains a non-finite scalar: {e}") from e
    return atomic_write(path, text + "\n")
