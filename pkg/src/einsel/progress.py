"""Progress tracking and results display.

Progress bars render on stderr so stdout stays clean; the results table goes
to the shared stdout console.
"""

from __future__ import annotations

from types import TracebackType
from typing import TYPE_CHECKING

from rich.console import Console
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)
from rich.table import Table

if TYPE_CHECKING:
    from einsel.experiments import RunReport


stdout_console = Console()
progress_console = Console(stderr=True)


class ProgressTracker:
    """Progress bar for a fixed number of work units.

    Used as a context manager; ``update`` matches the runner's progress
    callback signature, so it can be handed straight to library functions.

    Example:
        >>> with ProgressTracker("Haar samples", total=500) as tracker:
        ...     stats = mc_average_distance(10, split, 500, sampler, progress=tracker.update)
    """

    def __init__(
        self,
        description: str,
        total: int,
        enabled: bool = True,
        console: Console | None = None,
    ) -> None:
        """Initialize progress tracker.

        Args:
            description: Label shown next to the bar.
            total: Number of work units.
            enabled: Render at all; rendering also requires a terminal.
            console: Console to draw on (stderr by default).
        """
        self.description = description
        self.total = total
        self.console = console or progress_console
        self.enabled = enabled and self.console.is_terminal
        self._progress: Progress | None = None
        self._task_id: TaskID | None = None

    def _create_progress_bar(self) -> Progress:
        """Create the progress bar."""
        return Progress(
            SpinnerColumn(),
            TextColumn("[bold blue]{task.description}"),
            BarColumn(bar_width=None),
            MofNCompleteColumn(),
            "•",
            TimeElapsedColumn(),
            "/",
            TimeRemainingColumn(),
            console=self.console,
            transient=True,
        )

    def __enter__(self) -> ProgressTracker:
        if self.enabled:
            self._progress = self._create_progress_bar()
            self._progress.start()
            self._task_id = self._progress.add_task(
                f"[cyan]{self.description}", total=self.total, completed=0
            )
        return self

    def update(self, done: int) -> None:
        """Record that ``done`` units have finished."""
        if self._progress is not None and self._task_id is not None:
            self._progress.update(self._task_id, completed=done)

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        traceback: TracebackType | None,
    ) -> None:
        if self._progress is not None:
            self._progress.stop()
            self._progress = None


def _format_scalar(value: object) -> str:
    if isinstance(value, bool):
        return "[green]yes[/green]" if value else "[red]no[/red]"
    if isinstance(value, float):
        return f"{value:.6g}"
    if value is None:
        return "[dim]n/a[/dim]"
    return str(value)


def show_run_summary(report: RunReport, console: Console | None = None) -> None:
    """Display the scalars of a finished run.

    Args:
        report: Finished run.
        console: Console to use (shared stdout console if None).
    """
    console = console or stdout_console

    table = Table(title=f"{report.experiment} results", title_style="bold cyan")
    table.add_column("Scalar", style="cyan", width=24)
    table.add_column("Value", style="white")

    table.add_row("Wall time", f"{report.wall_time:.2f}s")
    for key in sorted(report.scalars):
        table.add_row(key, _format_scalar(report.scalars[key]))

    console.print()
    console.print(table)

    files = "\n".join(f"• {path}" for path in report.files)
    console.print()
    console.print(Panel(files, title="Outputs", border_style="blue"))
