"""Experiment orchestration module.

Turns a validated ExperimentConfig into models, environments and time grids,
runs one of the four experiments, checks the numerical invariants of the
result and writes the CSV table plus summary.json.
"""

from __future__ import annotations

import json
import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, cast

from einsel.__version__ import __version__
from einsel.centralspin import (
    CentralSpinModel,
    DecoherenceTime,
    Environment,
    ProductEnvironment,
    TimeGrid,
    bloch_trajectory,
    decoherence_search_grid,
    decoherence_time,
    einselection_sweep,
    random_couplings,
)
from einsel.config import ExperimentConfig, canonicalize
from einsel.errors import ConfigurationError, InvariantViolation
from einsel.export import write_csv, write_summary
from einsel.kinematics import (
    DistanceStats,
    EnvironmentKind,
    HaarSampler,
    SubsystemSplit,
    bound,
    collect_distances,
    page_mean_entropy,
    persistence_experiment,
)
from einsel.progress import ProgressTracker
from einsel.qcore import PureState

PURITY_TOLERANCE = 1e-9
POINTER_PURITY_TOLERANCE = 1e-12
Z_DRIFT_TOLERANCE = 1e-10

TRAJECTORY_COLUMNS = ("t", "bloch_x", "bloch_y", "bloch_z", "purity", "re_r", "im_r", "abs_r")
DISTANCE_COLUMNS = ("sample_index", "trace_distance")
PERSISTENCE_COLUMNS = ("t", "mean_distance", "std_error", "max_distance", "bound_value")
SWEEP_COLUMNS = (
    "theta",
    "phi",
    "z_drift",
    "initial_xy",
    "final_xy",
    "final_purity",
    "predicted_final_purity",
)


@dataclass(frozen=True)
class RunReport:
    """Results of one experiment run.

    Attributes:
        experiment: Experiment name.
        version: einsel version that produced the run.
        wall_time: Seconds spent, including file writes.
        config: Canonical configuration echo (parsed canonical JSON).
        scalars: Experiment-specific summary scalars; floats are finite and
            quantities that do not exist (t_d of a frozen run) are None.
        files: Written output files.
    """

    experiment: str
    version: str
    wall_time: float
    config: dict[str, Any]
    scalars: dict[str, Any] = field(default_factory=dict)
    files: tuple[Path, ...] = ()

    def to_summary(self) -> dict[str, Any]:
        """summary.json content."""
        return {
            "experiment": self.experiment,
            "version": self.version,
            "wall_time": self.wall_time,
            "config": self.config,
            **self.scalars,
        }


def build_model(config: ExperimentConfig) -> CentralSpinModel:
    """Explicit couplings, or uniform (0, 1] couplings drawn from the coupling seed."""
    if config.couplings.values is not None:
        return CentralSpinModel(config.couplings.values)
    return random_couplings(config.num_env, config.coupling_seed)


def build_environment(config: ExperimentConfig) -> Environment:
    """Initial environment state; Haar environments use sample 0 of the env seed."""
    kind = config.env_spec.kind
    if kind == "plus_x_product":
        return ProductEnvironment.plus_x(config.num_env)
    if kind == "z_product":
        return ProductEnvironment.z_product(config.num_env)
    return HaarSampler(config.num_env, config.env_seed).state_at(0)


def central_from_config(config: ExperimentConfig) -> PureState:
    """Initial central state from the configured Bloch angles."""
    return PureState.from_bloch_angles(config.central_theta, config.central_phi)


def find_decoherence_time(
    config: ExperimentConfig, model: CentralSpinModel, env: Environment
) -> DecoherenceTime:
    """Decoherence time on the configured search grid."""
    grid = (
        decoherence_search_grid(model, config.decoherence_grid_points, config.decoherence_periods)
        if model.decohering
        else None
    )
    return decoherence_time(model, env, config.epsilon, grid)


def resolve_grid(config: ExperimentConfig, t_d: DecoherenceTime) -> TimeGrid:
    """Evaluation grid, scaling t_max by t_d when the time unit is ``decoherence``.

    Raises:
        ConfigurationError: If t_max is in decoherence units but the reference
            environment never reaches |r| <= epsilon.
    """
    t_max = config.time.t_max
    if config.time.unit == "decoherence" and t_max > 0:
        if not t_d.decohered:
            raise ConfigurationError(
                f"time.t_max is in decoherence units, but |r(t)| never drops to "
                f"{config.epsilon} within t <= {t_d.horizon:.6g}",
                suggestion="Use `time.unit: absolute`, or raise decoherence_periods.",
            )
        t_max *= t_d.time
    return TimeGrid.linspace(t_max, config.time.steps)


def _td_scalars(t_d: DecoherenceTime) -> dict[str, Any]:
    return {"t_d": t_d.time if t_d.decohered else None, "decohered": t_d.decohered}


def _require_finite(scalars: dict[str, Any]) -> None:
    for key, value in scalars.items():
        if isinstance(value, float) and not math.isfinite(value):
            raise InvariantViolation(f"Summary scalar '{key}' is not finite ({value})")


def _require_experiment(config: ExperimentConfig, name: str) -> None:
    if config.experiment != name:
        raise ConfigurationError(f"Config describes '{config.experiment}', not '{name}'")


def _finish(
    config: ExperimentConfig,
    started: float,
    scalars: dict[str, Any],
    files: list[Path],
) -> RunReport:
    _require_finite(scalars)
    summary_path = Path(config.output_dir) / "summary.json"
    report = RunReport(
        experiment=config.experiment,
        version=__version__,
        wall_time=time.perf_counter() - started,
        config=json.loads(canonicalize(config)),
        scalars=scalars,
        files=(*files, summary_path),
    )
    write_summary(summary_path, report.to_summary())
    return report


def run_evolve(config: ExperimentConfig, show_progress: bool = False) -> RunReport:
    """Central-spin Bloch trajectory: trajectory.csv and summary.json.

    Raises:
        InvariantViolation: If central purity leaves [1/2, 1] or |r| exceeds 1,
            or the z component of the Bloch vector drifts.
    """
    _require_experiment(config, "evolve")
    started = time.perf_counter()

    model = build_model(config)
    env = build_environment(config)
    central = central_from_config(config)
    t_d = find_decoherence_time(config, model, env)
    grid = resolve_grid(config, t_d)

    with ProgressTracker("Trajectory", len(grid), enabled=show_progress) as tracker:
        points = bloch_trajectory(
            model, central, env, grid, max_workers=config.max_workers, progress=tracker.update
        )

    z0 = points[0].bloch.z
    for point in points:
        if not 0.5 - PURITY_TOLERANCE <= point.purity <= 1.0 + PURITY_TOLERANCE:
            raise InvariantViolation(f"Central purity {point.purity!r} at t={point.t!r}")
        if abs(point.factor) > 1.0 + PURITY_TOLERANCE:
            raise InvariantViolation(f"|r| = {abs(point.factor)!r} exceeds 1 at t={point.t!r}")
        if abs(point.bloch.z - z0) > Z_DRIFT_TOLERANCE:
            raise InvariantViolation(f"Bloch z drifted to {point.bloch.z!r} at t={point.t!r}")

    trajectory = write_csv(
        Path(config.output_dir) / "trajectory.csv",
        TRAJECTORY_COLUMNS,
        (
            (
                p.t,
                p.bloch.x,
                p.bloch.y,
                p.bloch.z,
                p.purity,
                p.factor.real,
                p.factor.imag,
                abs(p.factor),
            )
            for p in points
        ),
    )

    scalars = {
        **_td_scalars(t_d),
        "final_abs_r": abs(points[-1].factor),
        "max_z_drift": max(abs(p.bloch.z - z0) for p in points),
        "max_abs_r_after_t_d": t_d.max_abs_r_after,
        "final_purity": points[-1].purity,
        "grid_points": len(grid),
        "t_max": float(grid.times[-1]),
    }
    return _finish(config, started, scalars, [trajectory])


def run_kinematics(config: ExperimentConfig, show_progress: bool = False) -> RunReport:
    """Haar-typicality Monte Carlo: distances.csv and summary.json.

    Haar states live on the num_env-qubit register; subsystem_qubits select e1.
    """
    _require_experiment(config, "kinematics")
    started = time.perf_counter()

    split = SubsystemSplit(config.num_env, config.subsystem_qubits)
    sampler = HaarSampler(config.num_env, config.env_seed)

    with ProgressTracker("Haar samples", config.samples, enabled=show_progress) as tracker:
        collector = collect_distances(
            config.num_env,
            split,
            config.samples,
            sampler,
            max_workers=config.max_workers,
            progress=tracker.update,
        )

    distances = collector.values("distance")
    if any(not 0.0 <= d <= 1.0 for d in distances):
        raise InvariantViolation("A trace distance fell outside [0, 1]")

    stats = DistanceStats.from_statistics(
        collector.statistics("distance"), bound(split), collector.statistics("entropy")
    )
    table = write_csv(
        Path(config.output_dir) / "distances.csv",
        DISTANCE_COLUMNS,
        enumerate(distances),
    )

    scalars = {
        "mean": stats.mean,
        "std_error": stats.std_error,
        "max": stats.max,
        "bound_value": stats.bound_value,
        "bound_satisfied": stats.bound_satisfied(),
        "bound_ratio": stats.bound_ratio,
        "mean_entropy": stats.mean_entropy,
        "page_entropy": page_mean_entropy(split.d_subsystem, split.d_complement),
        "sample_count": stats.sample_count,
    }
    return _finish(config, started, scalars, [table])


def run_persistence(config: ExperimentConfig, show_progress: bool = False) -> RunReport:
    """Environment-subsystem mixedness along the evolution: persistence.csv and summary.json.

    subsystem_qubits are environment positions; the central spin starts in the
    configured state and the environment in env_spec. Time in decoherence
    units refers to the |+x> product environment.
    """
    _require_experiment(config, "persistence")
    started = time.perf_counter()

    model = build_model(config)
    t_d = find_decoherence_time(config, model, ProductEnvironment.plus_x(config.num_env))
    grid = resolve_grid(config, t_d)
    split = SubsystemSplit(config.num_env, config.subsystem_qubits)
    full_split = SubsystemSplit(model.num_qubits, split.subsystem.shifted(1))
    sampler = HaarSampler(config.num_env, config.env_seed)
    count = config.samples if config.env_spec.kind == "haar" else 1

    with ProgressTracker("Environment samples", count, enabled=show_progress) as tracker:
        series = persistence_experiment(
            model,
            full_split,
            config.samples,
            grid,
            sampler,
            central=central_from_config(config),
            environment=cast(EnvironmentKind, config.env_spec.kind),
            max_workers=config.max_workers,
            progress=tracker.update,
        )

    table = write_csv(
        Path(config.output_dir) / "persistence.csv",
        PERSISTENCE_COLUMNS,
        (
            (p.t, p.stats.mean, p.stats.std_error, p.stats.max, p.stats.bound_value)
            for p in series
        ),
    )

    start = series[0].stats
    scalars = {
        **_td_scalars(t_d),
        "max_mean_distance": max(p.stats.mean for p in series),
        "bound_value": start.bound_value,
        "bound_satisfied_all_t": all(p.stats.bound_satisfied() for p in series),
        "mean_distance_t0": start.mean,
        "max_deviation_from_t0": max(abs(p.stats.mean - start.mean) for p in series),
        "sample_count": start.sample_count,
    }
    return _finish(config, started, scalars, [table])


def run_sweep(config: ExperimentConfig, show_progress: bool = False) -> RunReport:
    """Trajectories for a grid of initial central states: sweep.csv and summary.json."""
    _require_experiment(config, "sweep")
    started = time.perf_counter()

    model = build_model(config)
    env = build_environment(config)
    t_d = find_decoherence_time(config, model, env)
    grid = resolve_grid(config, t_d)

    with ProgressTracker("Initial states", config.sweep_points, enabled=show_progress) as tracker:
        summaries = einselection_sweep(
            model,
            env,
            grid,
            count=config.sweep_points,
            max_workers=config.max_workers,
            progress=tracker.update,
        )

    for s in summaries:
        if s.z_drift > Z_DRIFT_TOLERANCE:
            raise InvariantViolation(f"Bloch z drifted by {s.z_drift!r} from theta={s.theta!r}")

    table = write_csv(
        Path(config.output_dir) / "sweep.csv",
        SWEEP_COLUMNS,
        (
            (
                s.theta,
                s.phi,
                s.z_drift,
                s.initial_xy,
                s.final_xy,
                s.final_purity,
                s.predicted_final_purity,
            )
            for s in summaries
        ),
    )

    pointers = [s for s in summaries if s.is_pointer_state]
    scalars = {
        **_td_scalars(t_d),
        "max_z_drift": max(s.z_drift for s in summaries),
        "max_purity_error": max(abs(s.final_purity - s.predicted_final_purity) for s in summaries),
        "pointer_states_pure": all(
            abs(p.purity - 1.0) <= POINTER_PURITY_TOLERANCE for s in pointers for p in s.points
        ),
        "state_count": len(summaries),
    }
    return _finish(config, started, scalars, [table])


RUNNERS: dict[str, Callable[[ExperimentConfig, bool], RunReport]] = {
    "evolve": run_evolve,
    "kinematics": run_kinematics,
    "persistence": run_persistence,
    "sweep": run_sweep,
}


def run_experiment(config: ExperimentConfig, show_progress: bool = False) -> RunReport:
    """Dispatch on config.experiment."""
    return RUNNERS[config.experiment](config, show_progress)
