"""Flat run configuration with YAML round-trip.

Every knob of a run lives here as one scalar field, so config files are
flat key-value documents and the metadata echo written next to run
artifacts is trivially diffable.
"""

import dataclasses
import os
from dataclasses import dataclass

import yaml

from . import body
from .learning import C_PHASE, E_PHASE, LearningConfig

OUT_DIR_ENV = "ALLOSYM_OUT_DIR"

ROLE_SCHEMES = ("double_exchange", "alternate_steps")


@dataclass
class RunConfig:
    seed: int = 0
    total_steps: int = 10_000
    n_obs: int = body.N_OBS
    n_states: int = body.N_STATES
    n_actions: int = body.N_ACTIONS
    n_symbols: int = 15
    eta_C: float = 0.2
    eta_E: float = 0.3
    tau_E: float = 0.05
    H_thres: float = 1.0
    T_phase: int = 50
    first_phase: str = E_PHASE
    beta_energy: float = 4.0
    beta_temp: float = 0.5
    temp_target_a: int = 5
    temp_target_b: int = 0
    init_count: float = 0.1
    role_scheme: str = "double_exchange"
    snapshot_interval: int = 500
    out_dir: str = "runs/run000"

    def validate(self) -> None:
        for name in ("n_obs", "n_states", "n_actions", "n_symbols"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")
        if self.total_steps < 0:
            raise ValueError(f"total_steps must be >= 0, got {self.total_steps}")
        if self.snapshot_interval < 1:
            raise ValueError(f"snapshot_interval must be >= 1, got {self.snapshot_interval}")
        if self.total_steps % self.snapshot_interval != 0:
            raise ValueError(
                f"snapshot_interval {self.snapshot_interval} must divide "
                f"total_steps {self.total_steps}"
            )
        if self.init_count <= 0:
            raise ValueError(f"init_count must be positive, got {self.init_count}")
        if self.beta_energy < 0 or self.beta_temp < 0:
            raise ValueError("preference slopes must be >= 0")
        for name in ("temp_target_a", "temp_target_b"):
            if not 0 <= getattr(self, name) < body.N_LEVELS:
                raise ValueError(f"{name} must be a level in [0, {body.N_LEVELS - 1}]")
        if self.role_scheme not in ROLE_SCHEMES:
            raise ValueError(f"role_scheme must be one of {ROLE_SCHEMES}, got {self.role_scheme!r}")
        self.learning()  # LearningConfig validates its own fields

    def learning(self) -> LearningConfig:
        return LearningConfig(
            eta_C=self.eta_C,
            eta_E=self.eta_E,
            tau_E=self.tau_E,
            H_thres=self.H_thres,
            T_phase=self.T_phase,
            first_phase=self.first_phase,
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_TYPES = {
    f.name: (f.type if isinstance(f.type, str) else f.type.__name__)
    for f in dataclasses.fields(RunConfig)
}


def from_dict(raw: dict) -> RunConfig:
    """Build a config from flat keys; unknown keys are an error."""
    unknown = sorted(set(raw) - set(_FIELD_TYPES))
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    coerced = {}
    for key, value in raw.items():
        want = _FIELD_TYPES[key]
        if want == "float" and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if want == "int" and not (isinstance(value, int) and not isinstance(value, bool)):
            raise ValueError(f"config key {key} must be an integer, got {value!r}")
        if want == "float" and not isinstance(value, float):
            raise ValueError(f"config key {key} must be a number, got {value!r}")
        if want == "str" and not isinstance(value, str):
            raise ValueError(f"config key {key} must be a string, got {value!r}")
        coerced[key] = value
    cfg = RunConfig(**coerced)
    cfg.validate()
    return cfg


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must hold a flat mapping")
    return from_dict(raw)


def dumps_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)


def dump_config(cfg: RunConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_config(cfg))


def resolve_out_dir(cfg: RunConfig) -> str:
    """Output directory, with the environment override taking precedence."""
    return os.environ.get(OUT_DIR_ENV) or cfg.out_dir
