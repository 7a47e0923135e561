"""Service configuration: file/env/flag layering and resource defaults."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path

import yaml

from .nlu import DEFAULT_THRESHOLD

ENV_CONFIG = "MSRBOT_CONFIG"


def data_path(name: str) -> Path:
    """Path of a resource shipped inside the package (vectors, NLU files)."""
    return Path(str(resources.files("msrbot") / "data" / name))


@dataclass
class ServiceConfig:
    kb_path: str
    vectors_path: str | None = None  # None -> packaged default
    nlu_path: str | None = None
    tau: float = DEFAULT_THRESHOLD
    port: int = 8000
    szz_filter_report_date: bool = True
    log_path: str | None = None
    fixed_now: str | None = None  # ISO instant; test reproducibility only

    def __post_init__(self):
        if not self.kb_path:
            raise ValueError("kb_path is required")
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")

    @property
    def resolved_vectors_path(self) -> Path:
        return Path(self.vectors_path) if self.vectors_path else data_path("vectors.txt")

    @property
    def resolved_nlu_path(self) -> Path:
        return Path(self.nlu_path) if self.nlu_path else data_path("nlu_training.yaml")


def load_config(path: str | None = None, **overrides) -> ServiceConfig:
    """Build a config from an optional YAML file plus non-None overrides.

    The file path falls back to the MSRBOT_CONFIG environment variable.
    """
    config_path = path or os.environ.get(ENV_CONFIG)
    values: dict = {}
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}
        if not isinstance(raw, dict):
            raise ValueError(f"{config_path}: config must be a mapping")
        known = {f.name for f in fields(ServiceConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"{config_path}: unknown config keys {sorted(unknown)}")
        values.update(raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ServiceConfig(**values)
