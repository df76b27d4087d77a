"""Configuration file utilities for einsel.

Generate, load, validate and canonicalize experiment configuration files.
YAML (.yaml/.yml) and JSON (anything else) are detected from the extension.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from einsel.errors import ConfigurationError

EXPERIMENTS = ("evolve", "kinematics", "persistence", "sweep")
ENVIRONMENTS = ("haar", "plus_x_product", "z_product")
TIME_UNITS = ("absolute", "decoherence")
MAX_QUBITS = 22
MAX_SEED = 2**64 - 1

KNOWN_KEYS = {
    "experiment",
    "seed",
    "num_env",
    "couplings",
    "central_state",
    "env_spec",
    "subsystem_qubits",
    "time",
    "samples",
    "epsilon",
    "output_dir",
    "max_workers",
    "decoherence_grid_points",
    "decoherence_periods",
    "sweep_points",
}


@dataclass(frozen=True)
class CouplingSpec:
    """Explicit couplings, or a seeded distribution to draw them from.

    Attributes:
        values: Explicit g_i, or None to draw from ``distribution``.
        distribution: Only "uniform" (on (0, 1]) is supported.
        seed: Seed for the draw; None means the config's top-level seed.
    """

    values: tuple[float, ...] | None = None
    distribution: str = "uniform"
    seed: int | None = None


@dataclass(frozen=True)
class EnvironmentSpec:
    """How the initial environment state is chosen.

    Attributes:
        kind: "haar", "plus_x_product" or "z_product".
        seed: Seed for Haar draws; None means the config's top-level seed.
    """

    kind: str = "plus_x_product"
    seed: int | None = None


@dataclass(frozen=True)
class TimeSpec:
    """Evaluation grid: ``steps`` evenly spaced times on [0, t_max].

    Attributes:
        t_max: Last time; in units of the decoherence time when
            ``unit == "decoherence"``.
        steps: Number of grid times; 1 means only t = 0.
        unit: "absolute" or "decoherence".
    """

    t_max: float = 3.0
    steps: int = 100
    unit: str = "decoherence"


@dataclass(frozen=True)
class ExperimentConfig:
    """Reproducible inputs of one experiment run.

    Attributes:
        experiment: "evolve", "kinematics", "persistence" or "sweep".
        seed: Mandatory top-level seed; every random stream derives from it
            unless a block sets its own.
        num_env: Environment qubits N (the Haar register size for kinematics).
        couplings: How couplings are chosen.
        central_theta: Polar Bloch angle of the initial central state.
        central_phi: Azimuthal Bloch angle of the initial central state.
        env_spec: How the initial environment is chosen; kinematics always
            samples Haar states.
        subsystem_qubits: Environment-register positions (0-based) of e1.
        time: Evaluation time grid.
        samples: Monte Carlo sample count.
        epsilon: Decoherence threshold on |r(t)|.
        output_dir: Directory for CSV and JSON outputs.
        max_workers: Concurrent samples / time points.
        decoherence_grid_points: Points of the decoherence-time search grid.
        decoherence_periods: Search horizon in units of 2 pi / mean coupling.
        sweep_points: Initial states in the sweep experiment.
    """

    experiment: str
    seed: int
    num_env: int = 10
    couplings: CouplingSpec = field(default_factory=CouplingSpec)
    central_theta: float = math.pi / 2
    central_phi: float = 0.0
    env_spec: EnvironmentSpec = field(default_factory=EnvironmentSpec)
    subsystem_qubits: tuple[int, ...] = (0,)
    time: TimeSpec = field(default_factory=TimeSpec)
    samples: int = 500
    epsilon: float = 0.01
    output_dir: str = "einsel-output"
    max_workers: int = 1
    decoherence_grid_points: int = 2000
    decoherence_periods: float = 2.0
    sweep_points: int = 9

    @property
    def coupling_seed(self) -> int:
        """Seed used to draw the couplings."""
        return self.couplings.seed if self.couplings.seed is not None else self.seed

    @property
    def env_seed(self) -> int:
        """Seed used for Haar environment states."""
        return self.env_spec.seed if self.env_spec.seed is not None else self.seed

    def with_overrides(
        self,
        seed: int | None = None,
        output_dir: str | Path | None = None,
        max_workers: int | None = None,
    ) -> ExperimentConfig:
        """Apply command-line overrides.

        A seed override also clears per-block seeds, so every stream follows it.
        """
        config = self
        if seed is not None:
            config = replace(
                config,
                seed=seed,
                couplings=replace(config.couplings, seed=None),
                env_spec=replace(config.env_spec, seed=None),
            )
        if output_dir is not None:
            config = replace(config, output_dir=str(output_dir))
        if max_workers is not None:
            config = replace(config, max_workers=max_workers)
        issues = validate_config(to_dict(config))
        if issues:
            raise ConfigurationError("Invalid override", issues=issues)
        return config


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    if not (_is_int(value) or isinstance(value, float)):
        return False
    try:
        return math.isfinite(value)
    except OverflowError:
        return False


def _default_environment(experiment: Any) -> str:
    return "haar" if experiment == "kinematics" else "plus_x_product"


def _check_seed(value: Any, where: str, issues: list[str]) -> None:
    if not _is_int(value) or not 0 <= value <= MAX_SEED:
        issues.append(f"{where} must be an integer in [0, 2^64), got {value!r}")


def _subsystem_issues(subsystem: Any, num_env: int | None) -> list[str]:
    if (
        not isinstance(subsystem, list)
        or not subsystem
        or not all(_is_int(i) for i in subsystem)
    ):
        return ["subsystem_qubits must be a non-empty list of integers"]
    issues = []
    if any(b <= a for a, b in zip(subsystem, subsystem[1:])):
        issues.append("subsystem_qubits must be sorted and distinct")
    if num_env is not None:
        if subsystem[0] < 0 or subsystem[-1] >= num_env:
            issues.append(f"subsystem_qubits must lie in [0, {num_env})")
        if len(subsystem) >= num_env:
            issues.append("subsystem_qubits must leave at least one environment qubit traced out")
    return issues


def validate_config(config: dict[str, Any]) -> list[str]:
    """Validate a configuration mapping and return the list of issues.

    Args:
        config: Parsed configuration file.

    Returns:
        Human-readable issues; empty when the config is valid.
    """
    issues: list[str] = []
    if not isinstance(config, dict):
        return [f"Config must be a mapping, got {type(config).__name__}"]

    unknown = sorted(set(config) - KNOWN_KEYS)
    if unknown:
        issues.append(f"Unknown keys: {', '.join(unknown)}")

    experiment = config.get("experiment")
    if experiment not in EXPERIMENTS:
        issues.append(f"experiment must be one of {', '.join(EXPERIMENTS)}, got {experiment!r}")

    if "seed" not in config:
        issues.append("seed is required (runs never draw entropy from the clock)")
    else:
        _check_seed(config["seed"], "seed", issues)

    num_env = config.get("num_env", 10)
    if not _is_int(num_env) or not 1 <= num_env <= MAX_QUBITS:
        issues.append(f"num_env must be an integer in [1, {MAX_QUBITS}], got {num_env!r}")
        num_env = None

    couplings = config.get("couplings", {"distribution": "uniform"})
    if isinstance(couplings, list):
        if not all(_is_number(g) for g in couplings):
            issues.append("couplings must be finite numbers")
        elif num_env is not None and len(couplings) != num_env:
            issues.append(f"couplings has {len(couplings)} entries, num_env is {num_env}")
    elif isinstance(couplings, dict):
        if couplings.get("distribution", "uniform") != "uniform":
            issues.append(f"Unknown coupling distribution {couplings.get('distribution')!r}")
        if couplings.get("seed") is not None:
            _check_seed(couplings["seed"], "couplings.seed", issues)
        extra = sorted(set(couplings) - {"distribution", "seed"})
        if extra:
            issues.append(f"Unknown couplings keys: {', '.join(extra)}")
    else:
        issues.append("couplings must be a list or a {distribution, seed} mapping")

    central = config.get("central_state", {})
    if not isinstance(central, dict):
        issues.append("central_state must be a {theta, phi} mapping")
    else:
        for angle in ("theta", "phi"):
            if angle in central and not _is_number(central[angle]):
                issues.append(f"central_state.{angle} must be a finite number")

    env = config.get("env_spec", {})
    if not isinstance(env, dict):
        issues.append("env_spec must be a {kind, seed} mapping")
    else:
        kind = env.get("kind", _default_environment(experiment))
        if kind not in ENVIRONMENTS:
            issues.append(f"env_spec.kind must be one of {', '.join(ENVIRONMENTS)}")
        elif experiment == "kinematics" and kind != "haar":
            issues.append("kinematics always samples Haar states; env_spec.kind must be haar")
        if env.get("seed") is not None:
            _check_seed(env["seed"], "env_spec.seed", issues)

    # index ranges only matter where a subsystem is actually traced
    in_range_of = num_env if experiment in ("kinematics", "persistence") else None
    issues.extend(_subsystem_issues(config.get("subsystem_qubits", [0]), in_range_of))

    time = config.get("time", {})
    if not isinstance(time, dict):
        issues.append("time must be a {t_max, steps, unit} mapping")
    else:
        steps = time.get("steps", 100)
        t_max = time.get("t_max", 3.0)
        if not _is_int(steps) or steps < 1:
            issues.append(f"time.steps must be an integer >= 1, got {steps!r}")
        if not _is_number(t_max) or t_max < 0:
            issues.append(f"time.t_max must be a non-negative number, got {t_max!r}")
        elif _is_int(steps) and steps > 1 and t_max == 0:
            issues.append("time.t_max must be positive when time.steps > 1")
        if time.get("unit", "decoherence") not in TIME_UNITS:
            issues.append(f"time.unit must be one of {', '.join(TIME_UNITS)}")

    samples = config.get("samples", 500)
    if experiment in ("kinematics", "persistence") and (not _is_int(samples) or samples < 2):
        issues.append(f"samples must be an integer >= 2, got {samples!r}")

    epsilon = config.get("epsilon", 0.01)
    if not _is_number(epsilon) or not 0 < epsilon < 1:
        issues.append(f"epsilon must lie in (0, 1), got {epsilon!r}")

    output_dir = config.get("output_dir", "einsel-output")
    if not isinstance(output_dir, str) or not output_dir:
        issues.append("output_dir must be a non-empty path")

    for key, minimum in (("max_workers", 1), ("decoherence_grid_points", 2), ("sweep_points", 1)):
        value = config.get(key, minimum)
        if not _is_int(value) or value < minimum:
            issues.append(f"{key} must be an integer >= {minimum}, got {value!r}")

    periods = config.get("decoherence_periods", 2.0)
    if not _is_number(periods) or periods <= 0:
        issues.append(f"decoherence_periods must be positive, got {periods!r}")

    return issues


def from_dict(config: dict[str, Any]) -> ExperimentConfig:
    """Create an ExperimentConfig from a dictionary.

    Args:
        config: Configuration dictionary

    Returns:
        Validated configuration with defaults filled in.

    Raises:
        ConfigurationError: If validation finds any issue.
    """
    issues = validate_config(config)
    if issues:
        raise ConfigurationError(
            f"Configuration has {len(issues)} problem(s)",
            suggestion="Run `einsel init --experiment <name>` for a known-good starting point.",
            issues=issues,
        )

    couplings = config.get("couplings", {"distribution": "uniform"})
    if isinstance(couplings, list):
        coupling_spec = CouplingSpec(values=tuple(float(g) for g in couplings))
    else:
        coupling_spec = CouplingSpec(
            distribution=couplings.get("distribution", "uniform"), seed=couplings.get("seed")
        )

    central = config.get("central_state", {})
    env = config.get("env_spec", {})
    time = config.get("time", {})

    return ExperimentConfig(
        experiment=config["experiment"],
        seed=config["seed"],
        num_env=config.get("num_env", 10),
        couplings=coupling_spec,
        central_theta=float(central.get("theta", math.pi / 2)),
        central_phi=float(central.get("phi", 0.0)),
        env_spec=EnvironmentSpec(
            kind=env.get("kind", _default_environment(config["experiment"])), seed=env.get("seed")
        ),
        subsystem_qubits=tuple(config.get("subsystem_qubits", [0])),
        time=TimeSpec(
            t_max=float(time.get("t_max", 3.0)),
            steps=time.get("steps", 100),
            unit=time.get("unit", "decoherence"),
        ),
        samples=config.get("samples", 500),
        epsilon=float(config.get("epsilon", 0.01)),
        output_dir=config.get("output_dir", "einsel-output"),
        max_workers=config.get("max_workers", 1),
        decoherence_grid_points=config.get("decoherence_grid_points", 2000),
        decoherence_periods=float(config.get("decoherence_periods", 2.0)),
        sweep_points=config.get("sweep_points", 9),
    )


def to_dict(config: ExperimentConfig) -> dict[str, Any]:
    """Convert an ExperimentConfig to a dictionary with every field explicit.

    Args:
        config: The config to convert

    Returns:
        Configuration dictionary
    """
    if config.couplings.values is not None:
        couplings: Any = list(config.couplings.values)
    else:
        couplings = {"distribution": config.couplings.distribution, "seed": config.couplings.seed}

    return {
        "experiment": config.experiment,
        "seed": config.seed,
        "num_env": config.num_env,
        "couplings": couplings,
        "central_state": {"theta": config.central_theta, "phi": config.central_phi},
        "env_spec": {"kind": config.env_spec.kind, "seed": config.env_spec.seed},
        "subsystem_qubits": list(config.subsystem_qubits),
        "time": {"t_max": config.time.t_max, "steps": config.time.steps, "unit": config.time.unit},
        "samples": config.samples,
        "epsilon": config.epsilon,
        "output_dir": config.output_dir,
        "max_workers": config.max_workers,
        "decoherence_grid_points": config.decoherence_grid_points,
        "decoherence_periods": config.decoherence_periods,
        "sweep_points": config.sweep_points,
    }


def canonicalize(config: ExperimentConfig) -> str:
    """Canonical JSON text: sorted keys, no whitespace, floats in repr form."""
    return json.dumps(to_dict(config), sort_keys=True, separators=(",", ":"))


def load_json(path: str | Path) -> ExperimentConfig:
    """Load configuration from JSON file.

    Args:
        path: File path

    Returns:
        Validated ExperimentConfig
    """
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except UnicodeDecodeError as e:
            raise ConfigurationError(f"{path} is not UTF-8 text: {e.reason}") from e
        except ValueError as e:
            raise ConfigurationError(f"Invalid JSON in {path}: {e}") from e
    return from_dict(data)


def load_yaml(path: str | Path) -> ExperimentConfig:
    """Load configuration from YAML file.

    Args:
        path: File path

    Returns:
        Validated ExperimentConfig
    """
    with open(path, encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML in {path}: {e}") from e
        except UnicodeDecodeError as e:
            raise ConfigurationError(f"{path} is not UTF-8 text: {e.reason}") from e
    return from_dict(data)


def load(path: str | Path) -> ExperimentConfig:
    """Load configuration (auto-detects format from extension).

    Args:
        path: File path (.json or .yaml/.yml)

    Returns:
        Validated ExperimentConfig

    Raises:
        ConfigurationError: If the file is missing, unparsable or invalid.

    Example:
        >>> config = load("persistence.yaml")
        >>> config.samples
        200
    """
    path = Path(path)

    if not path.is_file():
        raise ConfigurationError(
            f"Config file not found: {path}",
            suggestion="Generate one with: einsel init --experiment evolve --output evolve.yaml",
        )

    if path.suffix in (".yaml", ".yml"):
        return load_yaml(path)
    return load_json(path)


def save(config: ExperimentConfig, path: str | Path) -> Path:
    """Save configuration (auto-detects format from extension).

    Args:
        config: Config to save
        path: File path (.json or .yaml/.yml)

    Returns:
        The written path.
    """
    path = Path(path)
    data = to_dict(config)

    with open(path, "w", encoding="utf-8") as f:
        if path.suffix in (".yaml", ".yml"):
            yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False)
        else:
            json.dump(data, f, indent=2)
            f.write("\n")

    return path


def default_config(experiment: str, seed: int = 1234) -> ExperimentConfig:
    """The documented default setup for each experiment.

    Args:
        experiment: Experiment name.
        seed: Seed to embed.

    Returns:
        Default configuration.
    """
    if experiment == "evolve":
        return ExperimentConfig(
            experiment="evolve",
            seed=seed,
            num_env=12,
            time=TimeSpec(t_max=3.0, steps=200, unit="decoherence"),
            output_dir="runs/evolve",
        )
    if experiment == "kinematics":
        return ExperimentConfig(
            experiment="kinematics",
            seed=seed,
            num_env=10,
            env_spec=EnvironmentSpec(kind="haar"),
            samples=500,
            output_dir="runs/kinematics",
        )
    if experiment == "persistence":
        return ExperimentConfig(
            experiment="persistence",
            seed=seed,
            num_env=10,
            env_spec=EnvironmentSpec(kind="haar"),
            samples=200,
            time=TimeSpec(t_max=3.0, steps=20, unit="decoherence"),
            output_dir="runs/persistence",
        )
    if experiment == "sweep":
        return ExperimentConfig(
            experiment="sweep",
            seed=seed,
            num_env=12,
            time=TimeSpec(t_max=1.0, steps=100, unit="decoherence"),
            output_dir="runs/sweep",
        )
    raise ConfigurationError(
        f"Unknown experiment '{experiment}'",
        suggestion=f"Choose one of: {', '.join(EXPERIMENTS)}",
    )


def generate_config_file(experiment: str, output: str | Path, seed: int = 1234) -> Path:
    """Generate a new configuration file with the defaults of an experiment.

    This is a convenience function for CLI usage.

    Args:
        experiment: Experiment name
        output: Output file path
        seed: Seed to embed

    Returns:
        Path to generated file

    Example:
        >>> from einsel.config import generate_config_file
        >>> generate_config_file("kinematics", "kinematics.yaml")
    """
    return save(default_config(experiment, seed), output)
