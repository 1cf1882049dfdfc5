"""Solver configuration and its file format.

Config files are YAML (JSON is accepted, being a subset).  Every field has a
default except ``N`` and ``hamiltonian``; unknown keys are rejected so typos
surface as errors instead of silently using defaults.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Tuple, Union

import yaml

from .hamiltonian import CATALOG, HamiltonianSpec, from_catalog

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class SolverConfig:
    N: int
    hamiltonian: Union[str, dict]
    n: int = 1
    M: Optional[int] = None
    grid: int = 4
    random_seeds: int = 2
    rng_seed: int = 0
    perturbation: float = 0.05
    tol_residual: float = 1e-10
    tol_ode: float = 1e-4
    tol_deg: float = 1e-6
    delta: float = 1e-3
    epsilon: float = 0.5
    lambda_grid: Tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
    guard_radius: float = 1e3
    max_iter: int = 50
    max_step: float = 0.25
    ode_steps: int = 2000
    flow_time: float = 5.0
    flow_dt: float = 0.05
    bound_samples: int = 10_000
    threads: int = 1
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        _check_int("N", self.N, 1)
        _check_int("n", self.n, 1)
        _check_int("grid", self.grid, 1)
        _check_int("random_seeds", self.random_seeds, 0)
        _check_int("max_iter", self.max_iter, 1)
        _check_int("ode_steps", self.ode_steps, 1)
        _check_int("bound_samples", self.bound_samples, 0)
        _check_int("threads", self.threads, 1)
        if self.M is not None:
            _check_int("M", self.M, 2 * self.N + 1)
        for name in ("tol_residual", "tol_ode", "tol_deg", "delta", "epsilon", "guard_radius",
                     "max_step", "flow_time", "flow_dt"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
                raise ConfigError(name, f"must be a positive number, got {v!r}")
        if not isinstance(self.perturbation, (int, float)) or self.perturbation < 0:
            raise ConfigError("perturbation", "must be a nonnegative number")
        grid = tuple(float(v) for v in self.lambda_grid)
        if any(not 0.0 <= v <= 1.0 for v in grid) or list(grid) != sorted(grid):
            raise ConfigError("lambda_grid", "must be sorted values in [0, 1]")
        object.__setattr__(self, "lambda_grid", grid)
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError("schema_version", f"unsupported version {self.schema_version}")
        self.build_hamiltonian()

    @property
    def samples(self) -> int:
        return self.M if self.M is not None else 8 * self.N

    def build_hamiltonian(self) -> HamiltonianSpec:
        h = self.hamiltonian
        if isinstance(h, str):
            if h not in CATALOG:
                raise ConfigError("hamiltonian", f"unknown catalog key {h!r}; known: {sorted(CATALOG)}")
            return from_catalog(h, self.n)
        if isinstance(h, dict):
            if "terms" not in h:
                raise ConfigError("hamiltonian.terms", "missing field")
            try:
                return HamiltonianSpec.from_records(self.n, h["terms"])
            except ValueError as exc:
                raise ConfigError("hamiltonian." + str(exc).split(":")[0], str(exc)) from None
        raise ConfigError("hamiltonian", "must be a catalog key or a mapping with 'terms'")

    def replace(self, **changes) -> "SolverConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["lambda_grid"] = list(self.lambda_grid)
        return d


def _check_int(name: str, v: Any, lo: int):
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(name, f"must be an integer, got {v!r}")
    if v < lo:
        raise ConfigError(name, f"must be >= {lo}, got {v}")


_FIELDS = {f.name: f for f in dataclasses.fields(SolverConfig)}


def from_mapping(data: Any) -> SolverConfig:
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a mapping")
    for key in data:
        if key not in _FIELDS:
            raise ConfigError(str(key), "unknown field")
    for key in ("N", "hamiltonian"):
        if key not in data:
            raise ConfigError(key, "missing required field")
    kwargs = dict(data)
    for key, v in kwargs.items():
        # YAML 1.1 reads "1e-10" as a string
        if isinstance(v, str) and _FIELDS[key].type in ("float", "Optional[float]"):
            try:
                kwargs[key] = float(v)
            except ValueError:
                raise ConfigError(key, f"must be a number, got {v!r}") from None
    if "lambda_grid" in kwargs:
        if not isinstance(kwargs["lambda_grid"], (list, tuple)):
            raise ConfigError("lambda_grid", "must be a list")
        kwargs["lambda_grid"] = tuple(kwargs["lambda_grid"])
    return SolverConfig(**kwargs)


def load(path: Union[str, Path]) -> SolverConfig:
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"cannot parse {path}: {exc}") from None
    return from_mapping(data)


def dumps(cfg: SolverConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)
