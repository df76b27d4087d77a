"""Entry point for running einsel from the command line."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from rich.console import Console
from rich.panel import Panel
from rich.syntax import Syntax

from einsel import __version__
from einsel.config import EXPERIMENTS, ExperimentConfig, canonicalize, generate_config_file, load
from einsel.errors import (
    EXIT_OK,
    ConfigurationError,
    EinselError,
    ExportError,
    InvariantViolation,
    report_error,
)
from einsel.experiments import run_experiment
from einsel.progress import show_run_summary

console = Console()


def print_success(message: str) -> None:
    """Print a formatted success message.

    Args:
        message: Success message to display.
    """
    console.print(f"[bold green]✓[/bold green] {message}")


def print_info(message: str) -> None:
    """Print an info message.

    Args:
        message: Info message to display.
    """
    console.print(f"[blue]ℹ[/blue] {message}")


def fail(error: EinselError, quiet: bool) -> int:
    """Report an error on stderr and return its exit code."""
    report_error(error, interactive=not quiet)
    return error.exit_code


def load_config(path: str) -> ExperimentConfig:
    """Load a config file, mapping read failures to configuration errors.

    Raises:
        ConfigurationError: If the file is unreadable or invalid.
    """
    try:
        return load(path)
    except OSError as e:
        raise ConfigurationError(f"Could not read {path}: {e.strerror or e}") from e


def run_command(
    config_path: str,
    output_dir: str | None = None,
    seed_override: int | None = None,
    workers: int | None = None,
    quiet: bool = False,
) -> int:
    """Run the experiment described by a configuration file.

    Args:
        config_path: Path to the YAML or JSON configuration.
        output_dir: Optional output directory override.
        seed_override: Optional replacement for every seed in the config.
        workers: Optional max_workers override.
        quiet: Suppress console output except the machine-readable error line.

    Returns:
        Exit code: 0 success, 2 config invalid, 3 numerical failure, 4 I/O failure.
    """
    try:
        config = load_config(config_path).with_overrides(
            seed=seed_override, output_dir=output_dir, max_workers=workers
        )
    except ConfigurationError as e:
        return fail(e, quiet)

    print_info(
        f"Running [bold]{config.experiment}[/bold] (seed {config.seed}) into {config.output_dir}"
    )

    try:
        report = run_experiment(config, show_progress=not quiet)
    except EinselError as e:
        return fail(e, quiet)
    except (ValueError, ArithmeticError) as e:
        return fail(InvariantViolation(str(e)), quiet)
    except OSError as e:
        return fail(ExportError(str(e)), quiet)

    show_run_summary(report, console)
    print_success(f"Wrote {len(report.files)} files to {config.output_dir}")
    return EXIT_OK


def validate_command(config_path: str, quiet: bool = False) -> int:
    """Validate a configuration file and print its canonical form.

    Returns:
        0 if valid, 2 otherwise.
    """
    try:
        config = load_config(config_path)
    except ConfigurationError as e:
        return fail(e, quiet)

    canonical = json.dumps(json.loads(canonicalize(config)), indent=2, sort_keys=True)
    console.print(Panel(Syntax(canonical, "json"), title="Canonical configuration"))
    print_success(f"{config_path} is a valid {config.experiment} configuration")
    return EXIT_OK


def init_command(experiment: str, output: str | None, seed: int, quiet: bool = False) -> int:
    """Write the default configuration of an experiment."""
    path = Path(output or f"{experiment}.yaml")
    try:
        generate_config_file(experiment, path, seed)
    except ConfigurationError as e:
        return fail(e, quiet)
    except OSError as e:
        return fail(ExportError(f"Could not write {path}: {e.strerror or e}"), quiet)

    print_success(f"Created {path}")
    print_info(f"Run it with: einsel run --config {path}")
    return EXIT_OK


def show_version() -> None:
    """Display version information."""
    console.print(
        Panel(
            f"[bold]einsel[/bold] version [cyan]{__version__}[/cyan]\n"
            "Decoherence and einselection experiments on the central-spin model",
            title="einsel",
            border_style="cyan",
        )
    )


def main(args: list[str] | None = None) -> int:
    """Main entry point for the CLI.

    Args:
        args: Command line arguments (defaults to sys.argv[1:]).

    Returns:
        Exit code.
    """
    parser = argparse.ArgumentParser(
        prog="einsel",
        description="Reproducible decoherence and einselection experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  einsel init --experiment evolve              # Write evolve.yaml with defaults
  einsel validate --config evolve.yaml         # Check a config, print canonical form
  einsel run --config evolve.yaml              # Write trajectory.csv + summary.json
  einsel run --config k.yaml --seed-override 7 --output-dir runs/k7
        """,
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    run_parser = subparsers.add_parser(
        "run",
        help="Run an experiment from a configuration file",
        description="Execute the experiment described in a JSON or YAML file.",
    )
    run_parser.add_argument("--config", required=True, metavar="PATH", help="Config file")
    run_parser.add_argument("--output-dir", metavar="PATH", help="Override output_dir")
    run_parser.add_argument(
        "--seed-override", type=int, metavar="U64", help="Replace every seed in the config"
    )
    run_parser.add_argument("--workers", type=int, metavar="N", help="Override max_workers")
    run_parser.add_argument("-q", "--quiet", action="store_true", help="No console output")

    validate_parser = subparsers.add_parser("validate", help="Validate a configuration file")
    validate_parser.add_argument("--config", required=True, metavar="PATH", help="Config file")
    validate_parser.add_argument("-q", "--quiet", action="store_true", help="No console output")

    init_parser = subparsers.add_parser("init", help="Write a default configuration file")
    init_parser.add_argument("--experiment", required=True, choices=EXPERIMENTS)
    init_parser.add_argument("--output", metavar="PATH", help="Defaults to <experiment>.yaml")
    init_parser.add_argument("--seed", type=int, default=1234, help="Seed to embed")
    init_parser.add_argument("-q", "--quiet", action="store_true", help="No console output")

    subparsers.add_parser("version", help="Show version information")

    parsed = parser.parse_args(args)
    console.quiet = getattr(parsed, "quiet", False)

    if parsed.command == "run":
        try:
            return run_command(
                parsed.config,
                parsed.output_dir,
                parsed.seed_override,
                parsed.workers,
                parsed.quiet,
            )
        except KeyboardInterrupt:
            console.print("\n[yellow]⚠ Run interrupted by user[/yellow]")
            return 130
    elif parsed.command == "validate":
        return validate_command(parsed.config, parsed.quiet)
    elif parsed.command == "init":
        return init_command(parsed.experiment, parsed.output, parsed.seed, parsed.quiet)
    elif parsed.command == "version":
        show_version()
        return EXIT_OK
    else:
        parser.print_help()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
