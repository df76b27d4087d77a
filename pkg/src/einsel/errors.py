"""Error types with helpful suggestions.

Every failure the toolkit raises on purpose derives from ``EinselError``.
Each class carries the process exit code the CLI maps it to, and can render
itself as a rich panel with an actionable suggestion.
"""

from __future__ import annotations

import json
import re
import sys
from typing import Any

from rich.console import Console
from rich.panel import Panel
from rich.text import Text

console = Console(stderr=True)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class EinselError(Exception):
    """Base exception with helpful suggestions."""

    kind = "error"
    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, suggestion: str | None = None) -> None:
        """Initialize error with message and suggestion.

        Args:
            message: Error message.
            suggestion: Optional suggestion to help fix the error.
        """
        super().__init__(message)
        self.message = message
        self.suggestion = suggestion

    def to_dict(self) -> dict[str, Any]:
        """Machine-readable form written to the diagnostic stream."""
        return {"error": self.kind, "message": self.message, "exit_code": self.exit_code}


class ConfigurationError(EinselError, ValueError):
    """Configuration-related errors."""

    kind = "config_invalid"
    exit_code = EXIT_CONFIG

    def __init__(
        self, message: str, suggestion: str | None = None, issues: list[str] | None = None
    ) -> None:
        """Initialize with the full list of validation issues.

        Args:
            message: Error message.
            suggestion: Optional suggestion to help fix the error.
            issues: Every problem found while validating.
        """
        super().__init__(message, suggestion)
        self.issues = issues or []

    def to_dict(self) -> dict[str, Any]:
        """Include the individual validation issues."""
        data = super().to_dict()
        data["issues"] = self.issues
        return data


class StateError(EinselError, ValueError):
    """A vector or matrix violates the state invariants."""

    kind = "invalid_state"


class SubsystemError(EinselError, ValueError):
    """A qubit subset does not describe a valid subsystem."""

    kind = "invalid_subsystem"


class DimensionError(EinselError, ValueError):
    """Register sizes or matrix dimensions disagree."""

    kind = "dimension_mismatch"


class InvariantViolation(EinselError, ArithmeticError):
    """A numerical check failed after a computation."""

    kind = "invariant_violation"


class ExportError(EinselError, OSError):
    """Writing experiment outputs failed."""

    kind = "io_failure"
    exit_code = EXIT_IO


# Error patterns and suggestions
ERROR_SUGGESTIONS = {
    r"no such file|not found|errno 2": {
        "message": "File not found",
        "suggestion": (
            "Check the path passed to --config. Generate a starting point with:\n"
            "• einsel init --experiment evolve --output evolve.yaml"
        ),
    },
    r"permission denied|errno 13|read-only file system": {
        "message": "Permission denied",
        "suggestion": (
            "The output directory is not writable. Try:\n"
            "• einsel run --config <path> --output-dir /tmp/einsel-run"
        ),
    },
    r"no space left|errno 28": {
        "message": "Disk full",
        "suggestion": "Free some space or point --output-dir at another volume.",
    },
    r"samples": {
        "message": "Invalid sample count",
        "suggestion": "Monte Carlo statistics need at least two samples (samples: 500 is typical).",
    },
    r"seed": {
        "message": "Invalid or missing seed",
        "suggestion": (
            "Every config needs an explicit integer seed, e.g. `seed: 1234`.\n"
            "Runs never draw entropy from the clock."
        ),
    },
    r"subsystem|qubit": {
        "message": "Invalid subsystem",
        "suggestion": (
            "subsystem_qubits are positions in the environment register,\n"
            "0-based, sorted, distinct, and must leave at least one qubit traced out."
        ),
    },
    r"yaml|scanner|parser": {
        "message": "Could not parse YAML",
        "suggestion": "Check indentation and quoting in the config file.",
    },
    r"expecting value|json": {
        "message": "Could not parse JSON",
        "suggestion": "Check the file is valid JSON, or rename it to .yaml for YAML syntax.",
    },
}


def analyze_error(error: Exception) -> tuple[str, str | None]:
    """Analyze an error and return enhanced message with suggestion.

    Args:
        error: The exception to analyze

    Returns:
        Tuple of (message, suggestion)
    """
    if isinstance(error, EinselError) and error.suggestion:
        return error.message, error.suggestion

    error_str = str(error).lower()
    error_type = type(error).__name__.lower()
    full_error = f"{error_type}: {error_str}"

    for pattern, info in ERROR_SUGGESTIONS.items():
        if re.search(pattern, full_error):
            return info["message"], info["suggestion"]

    return str(error), None


def report_error(error: EinselError, interactive: bool = True) -> None:
    """Write the machine-readable error line, then a readable panel.

    Args:
        error: The error to report.
        interactive: Render the rich panel after the JSON line.
    """
    sys.stderr.write(json.dumps(error.to_dict(), sort_keys=True) + "\n")
    sys.stderr.flush()

    if not interactive:
        return

    message, suggestion = analyze_error(error)
    text = Text()
    text.append("✗ ", style="bold red")
    text.append(error.message, style="bold red")
    if isinstance(error, ConfigurationError) and error.issues:
        for issue in error.issues:
            text.append(f"\n  • {issue}", style="red")
    if suggestion:
        text.append("\n\n💡 ", style="bold yellow")
        text.append(suggestion, style="yellow")
    if message.lower() != error.message.lower():
        text.append(f"\n\n{message}", style="dim")

    console.print(Panel(text, border_style="red", title=f"Error ({error.kind})"))
