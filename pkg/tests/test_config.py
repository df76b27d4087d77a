"""Tests for configuration loading and validation."""

from __future__ import annotations

import json
import math
from collections.abc import Callable
from pathlib import Path

import pytest
import yaml

from einsel.config import (
    EXPERIMENTS,
    CouplingSpec,
    ExperimentConfig,
    canonicalize,
    default_config,
    from_dict,
    generate_config_file,
    load,
    save,
    to_dict,
    validate_config,
)
from einsel.errors import ConfigurationError


class TestValidateConfig:
    """Tests for validate_config."""

    def test_minimal_config_is_valid(self) -> None:
        """Test experiment and seed alone are enough."""
        assert validate_config({"experiment": "evolve", "seed": 1}) == []

    def test_not_a_mapping(self) -> None:
        """Test a list at top level is rejected."""
        assert validate_config([1, 2]) == ["Config must be a mapping, got list"]  # type: ignore[arg-type]

    def test_seed_required(self) -> None:
        """Test a missing seed is reported."""
        issues = validate_config({"experiment": "evolve"})
        assert any("seed is required" in issue for issue in issues)

    @pytest.mark.parametrize("seed", [-1, 2**64, 1.5, True, "7"])
    def test_bad_seeds(self, seed: object) -> None:
        """Test seeds must be unsigned 64-bit integers."""
        issues = validate_config({"experiment": "evolve", "seed": seed})
        assert any(issue.startswith("seed must be") for issue in issues)

    def test_unknown_experiment_and_keys(self) -> None:
        """Test every problem is reported at once."""
        issues = validate_config({"experiment": "teleport", "seed": 1, "colour": "red"})
        assert len(issues) == 2
        assert "Unknown keys: colour" in issues

    def test_couplings_length_must_match(self) -> None:
        """Test explicit couplings need one entry per environment qubit."""
        issues = validate_config(
            {"experiment": "evolve", "seed": 1, "num_env": 3, "couplings": [0.1, 0.2]}
        )
        assert issues == ["couplings has 2 entries, num_env is 3"]

    def test_unknown_distribution(self) -> None:
        """Test only uniform couplings can be drawn."""
        issues = validate_config(
            {"experiment": "evolve", "seed": 1, "couplings": {"distribution": "gaussian"}}
        )
        assert any("distribution" in issue for issue in issues)

    @pytest.mark.parametrize("num_env", [0, 23, 2.0])
    def test_num_env_range(self, num_env: object) -> None:
        """Test num_env bounds."""
        issues = validate_config({"experiment": "evolve", "seed": 1, "num_env": num_env})
        assert any(issue.startswith("num_env") for issue in issues)

    @pytest.mark.parametrize(
        ("subsystem", "fragment"),
        [
            ([], "non-empty"),
            ([1, 0], "sorted"),
            ([0, 0], "sorted"),
            ([4], "lie in"),
            ([0, 1, 2, 3], "traced out"),
        ],
    )
    def test_kinematics_subsystem(self, subsystem: list[int], fragment: str) -> None:
        """Test subsystem positions for a four-qubit register."""
        issues = validate_config(
            {"experiment": "kinematics", "seed": 1, "num_env": 4, "subsystem_qubits": subsystem}
        )
        assert any(fragment in issue for issue in issues)

    def test_evolve_ignores_subsystem_range(self) -> None:
        """Test a one-qubit environment is valid for evolve."""
        assert validate_config({"experiment": "evolve", "seed": 1, "num_env": 1}) == []

    def test_samples_needed_for_monte_carlo(self) -> None:
        """Test samples = 1 is rejected for kinematics only."""
        base = {"seed": 1, "samples": 1}
        assert validate_config({"experiment": "kinematics", **base})
        assert validate_config({"experiment": "evolve", **base}) == []

    @pytest.mark.parametrize(
        "time_block",
        [{"steps": 0}, {"t_max": -1.0}, {"t_max": 0.0, "steps": 5}, {"unit": "fortnights"}],
    )
    def test_time_block(self, time_block: dict[str, object]) -> None:
        """Test invalid time grids."""
        assert validate_config({"experiment": "evolve", "seed": 1, "time": time_block})

    def test_single_step_at_zero_is_valid(self) -> None:
        """Test steps = 1 with t_max = 0 is allowed."""
        config = {"experiment": "evolve", "seed": 1, "time": {"t_max": 0.0, "steps": 1}}
        assert validate_config(config) == []

    @pytest.mark.parametrize("epsilon", [0.0, 1.0, float("nan")])
    def test_epsilon_range(self, epsilon: float) -> None:
        """Test epsilon must lie strictly between 0 and 1."""
        assert validate_config({"experiment": "evolve", "seed": 1, "epsilon": epsilon})

    def test_unknown_environment(self) -> None:
        """Test env_spec.kind choices."""
        issues = validate_config({"experiment": "evolve", "seed": 1, "env_spec": {"kind": "bath"}})
        assert any("env_spec.kind" in issue for issue in issues)

    @pytest.mark.parametrize("key", ["epsilon", "decoherence_periods"])
    def test_huge_integers_are_issues(self, key: str) -> None:
        """Test integers beyond float range are reported, not raised."""
        issues = validate_config({"experiment": "evolve", "seed": 1, key: 10**400})
        assert any(key in issue for issue in issues)

    def test_huge_coupling_is_an_issue(self) -> None:
        """Test an explicit coupling beyond float range is reported."""
        config = {"experiment": "evolve", "seed": 1, "num_env": 2, "couplings": [1, 10**400]}
        assert "couplings must be finite numbers" in validate_config(config)

    @pytest.mark.parametrize("kind", ["plus_x_product", "z_product"])
    def test_kinematics_needs_haar(self, kind: str) -> None:
        """Test kinematics rejects product environments."""
        issues = validate_config(
            {"experiment": "kinematics", "seed": 1, "env_spec": {"kind": kind}}
        )
        assert any("must be haar" in issue for issue in issues)


class TestFromDict:
    """Tests for from_dict and to_dict."""

    def test_defaults_filled_in(self) -> None:
        """Test omitted fields take their defaults."""
        config = from_dict({"experiment": "evolve", "seed": 5})
        assert config.num_env == 10
        assert config.central_theta == pytest.approx(math.pi / 2)
        assert config.env_spec.kind == "plus_x_product"
        assert config.time.unit == "decoherence"
        assert config.coupling_seed == 5
        assert config.env_seed == 5

    def test_kinematics_defaults_to_haar(self) -> None:
        """Test kinematics configs without env_spec sample Haar states."""
        config = from_dict({"experiment": "kinematics", "seed": 5})
        assert config.env_spec.kind == "haar"
        assert config.with_overrides(max_workers=2).env_spec.kind == "haar"

    def test_explicit_couplings(self) -> None:
        """Test a coupling list becomes explicit values."""
        config = from_dict(
            {"experiment": "evolve", "seed": 5, "num_env": 2, "couplings": [1, 0.5]}
        )
        assert config.couplings == CouplingSpec(values=(1.0, 0.5))

    def test_block_seeds(self) -> None:
        """Test per-block seeds override the top-level seed."""
        config = from_dict(
            {
                "experiment": "kinematics",
                "seed": 5,
                "couplings": {"seed": 11},
                "env_spec": {"kind": "haar", "seed": 12},
            }
        )
        assert config.coupling_seed == 11
        assert config.env_seed == 12

    def test_invalid_raises_with_issues(self) -> None:
        """Test from_dict carries every issue."""
        with pytest.raises(ConfigurationError) as info:
            from_dict({"experiment": "nope"})
        assert len(info.value.issues) == 2
        assert info.value.exit_code == 2

    def test_to_dict_round_trips(self) -> None:
        """Test a config survives to_dict then from_dict."""
        config = default_config("persistence", seed=9)
        assert from_dict(to_dict(config)) == config


class TestCanonicalize:
    """Tests for canonicalize."""

    def test_sorted_and_compact(self) -> None:
        """Test canonical JSON has sorted keys and no whitespace."""
        text = canonicalize(from_dict({"experiment": "evolve", "seed": 3}))
        assert " " not in text
        keys = list(json.loads(text))
        assert keys == sorted(keys)

    def test_equivalent_configs_match(self) -> None:
        """Test omitted defaults and explicit defaults canonicalize identically."""
        short = from_dict({"experiment": "evolve", "seed": 3})
        explicit = from_dict(
            {"experiment": "evolve", "seed": 3, "num_env": 10, "epsilon": 0.01, "max_workers": 1}
        )
        assert canonicalize(short) == canonicalize(explicit)


class TestOverrides:
    """Tests for ExperimentConfig.with_overrides."""

    def test_seed_override_clears_block_seeds(self) -> None:
        """Test every stream follows an overridden seed."""
        config = from_dict(
            {"experiment": "kinematics", "seed": 1, "env_spec": {"kind": "haar", "seed": 4}}
        )
        overridden = config.with_overrides(seed=77)
        assert overridden.env_seed == 77
        assert overridden.coupling_seed == 77

    def test_output_and_workers(self, tmp_path: Path) -> None:
        """Test output_dir and max_workers overrides."""
        config = default_config("evolve").with_overrides(output_dir=tmp_path, max_workers=4)
        assert config.output_dir == str(tmp_path)
        assert config.max_workers == 4

    def test_invalid_override(self) -> None:
        """Test overrides are validated."""
        with pytest.raises(ConfigurationError):
            default_config("evolve").with_overrides(max_workers=0)

    def test_no_override_is_identity(self) -> None:
        """Test with_overrides() without arguments changes nothing."""
        config = default_config("sweep")
        assert config.with_overrides() == config


class TestLoad:
    """Tests for file loading and saving."""

    def test_load_yaml(self, write_config: Callable[..., Path]) -> None:
        """Test YAML configs load."""
        path = write_config({"experiment": "sweep", "seed": 2, "sweep_points": 5})
        config = load(path)
        assert config.experiment == "sweep"
        assert config.sweep_points == 5

    def test_load_json(self, write_config: Callable[..., Path]) -> None:
        """Test JSON configs load."""
        path = write_config({"experiment": "evolve", "seed": 2}, name="config.json")
        assert load(path).seed == 2

    def test_missing_file(self, tmp_path: Path) -> None:
        """Test a missing file is a configuration error."""
        with pytest.raises(ConfigurationError, match="not found"):
            load(tmp_path / "absent.yaml")

    def test_unparsable_yaml(self, tmp_path: Path) -> None:
        """Test broken YAML is a configuration error."""
        path = tmp_path / "bad.yaml"
        path.write_text("experiment: [evolve\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="Invalid YAML"):
            load(path)

    def test_unparsable_json(self, tmp_path: Path) -> None:
        """Test broken JSON is a configuration error."""
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="Invalid JSON"):
            load(path)

    @pytest.mark.parametrize("suffix", [".yaml", ".json"])
    def test_not_utf8(self, tmp_path: Path, suffix: str) -> None:
        """Test a file that is not UTF-8 is a configuration error."""
        path = tmp_path / f"bad{suffix}"
        path.write_bytes(b'{"experiment": "evolve", "seed": 1, "output_dir": "\xff\xfe"}')
        with pytest.raises(ConfigurationError, match="not UTF-8"):
            load(path)

    def test_huge_integer_in_json(self, tmp_path: Path) -> None:
        """Test an out-of-range JSON number fails validation cleanly."""
        path = tmp_path / "big.json"
        path.write_text(
            '{"experiment": "evolve", "seed": 1, "epsilon": 1' + "0" * 400 + "}", encoding="utf-8"
        )
        with pytest.raises(ConfigurationError) as excinfo:
            load(path)
        assert any("epsilon" in issue for issue in excinfo.value.issues)

    @pytest.mark.parametrize("suffix", [".yaml", ".json"])
    def test_save_then_load(self, tmp_path: Path, suffix: str) -> None:
        """Test saved configs load back unchanged."""
        config = default_config("kinematics", seed=21)
        path = save(config, tmp_path / f"kinematics{suffix}")
        assert load(path) == config


class TestDefaults:
    """Tests for default_config and generate_config_file."""

    @pytest.mark.parametrize("experiment", EXPERIMENTS)
    def test_defaults_are_valid(self, experiment: str) -> None:
        """Test every default passes validation."""
        config = default_config(experiment, seed=3)
        assert isinstance(config, ExperimentConfig)
        assert validate_config(to_dict(config)) == []

    def test_unknown_experiment(self) -> None:
        """Test an unknown experiment name."""
        with pytest.raises(ConfigurationError):
            default_config("teleport")

    def test_generate_config_file(self, tmp_path: Path) -> None:
        """Test the generated YAML carries the seed."""
        path = generate_config_file("evolve", tmp_path / "evolve.yaml", seed=99)
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
        assert data["seed"] == 99
        assert data["experiment"] == "evolve"

    def test_example_configs_are_valid(self) -> None:
        """Test the shipped example configs load."""
        configs = Path(__file__).parent.parent / "configs"
        for experiment in EXPERIMENTS:
            assert load(configs / f"{experiment}.yaml").experiment == experiment
