"""Result export for einsel.

CSV tables for plotting and a JSON summary for regression checks, both
written atomically.
"""

from __future__ import annotations

from einsel.export.files import (
    atomic_write,
    format_value,
    render_csv,
    write_csv,
    write_summary,
)

__all__ = [
    "atomic_write",
    "format_value",
    "render_csv",
    "write_csv",
    "write_summary",
]
