"""Shared pytest fixtures."""

from __future__ import annotations

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest
import yaml


@pytest.fixture
def rng() -> np.random.Generator:
    """Deterministic generator for test inputs."""
    return np.random.default_rng(20240611)


@pytest.fixture
def couplings() -> list[float]:
    """Small, incommensurate coupling vector."""
    return [0.31, 0.74, 1.12, 0.48]


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[..., Path]:
    """Write a config mapping to YAML (or JSON) and return its path."""

    def write(data: dict[str, Any], name: str = "config.yaml") -> Path:
        path = tmp_path / name
        data = {"output_dir": str(tmp_path / "out"), **data}
        with open(path, "w", encoding="utf-8") as f:
            if path.suffix == ".json":
                json.dump(data, f)
            else:
                yaml.safe_dump(data, f)
        return path

    return write
