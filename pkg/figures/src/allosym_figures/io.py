"""Readers and schema checks for simulator run directories.

A run directory contains meta.json ({"config": {...}}), log.csv (one row
per exchange, leading "# columns:" comment), and snap_{step:06d}_{A|B}.json
snapshot files. Every reader raises :class:`SchemaError` with the offending
path and a description when a file is missing or malformed; the rendering
layer converts that into a nonzero exit.
"""

import json
import os
import re

import numpy as np
import pandas as pd

AGENT_IDS = ("A", "B")

# per-exchange log schema, in file order
LOG_COLUMNS = (
    "step", "exchange", "listener_id", "speaker_id", "w_sp", "w_li", "w_used",
    "accepted", "r", "action", "energy_A", "temp_A", "energy_B", "temp_B",
    "jsd_C", "acc_rate_200", "entA_A", "entA_B", "phase", "gate_sp",
)

SNAPSHOT_KEYS = {"step", "agent", "E"}
AGENT_KEYS = {"A", "C", "C_scores", "phi"}

# the interpretation matrix maps these actions, in index order, to symbols
N_ACTIONS = 5

_SNAP_RE = re.compile(r"^snap_(\d{6})_([AB])\.json$")


class SchemaError(ValueError):
    """A run artifact is missing or does not match the documented schema."""


def _require_file(path: str) -> None:
    if not os.path.isfile(path):
        raise SchemaError(f"{path}: missing run artifact")


def load_meta(run_dir: str) -> dict:
    """Parse meta.json and return the recorded config mapping."""
    path = os.path.join(run_dir, "meta.json")
    _require_file(path)
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(payload, dict) or "config" not in payload:
        raise SchemaError(f"{path}: expected an object with a 'config' key")
    config = payload["config"]
    if not isinstance(config, dict):
        raise SchemaError(f"{path}: 'config' must be a mapping")
    return config


def load_log(run_dir: str) -> pd.DataFrame:
    """Parse log.csv into a DataFrame, checking the column schema."""
    path = os.path.join(run_dir, "log.csv")
    _require_file(path)
    try:
        frame = pd.read_csv(path, comment="#")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise SchemaError(f"{path}: unreadable CSV ({exc})") from exc
    missing = [col for col in LOG_COLUMNS if col not in frame.columns]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing}")
    return frame


def snapshot_steps(run_dir: str) -> list:
    """Sorted snapshot steps that have files for both agents."""
    if not os.path.isdir(run_dir):
        raise SchemaError(f"{run_dir}: not a run directory")
    found = {aid: set() for aid in AGENT_IDS}
    for name in os.listdir(run_dir):
        match = _SNAP_RE.match(name)
        if match:
            found[match.group(2)].add(int(match.group(1)))
    steps = sorted(found["A"] & found["B"])
    if not steps:
        raise SchemaError(f"{run_dir}: no snap_NNNNNN_A/B.json snapshot pairs")
    lone = sorted((found["A"] | found["B"]) - set(steps))
    if lone:
        raise SchemaError(f"{run_dir}: snapshots {lone} lack one agent's file")
    return steps


def _as_array(path: str, payload, key: str, ndim: int) -> np.ndarray:
    try:
        arr = np.asarray(payload, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: '{key}' is not numeric ({exc})") from exc
    if arr.ndim != ndim:
        raise SchemaError(f"{path}: '{key}' must be {ndim}-dimensional,"
                          f" got shape {arr.shape}")
    return arr


def load_snapshot(run_dir: str, step: int, agent_id: str) -> dict:
    """Parse and validate one agent's snapshot at ``step``.

    Returns {"step", "A", "C", "C_scores", "phi", "E"} with numpy arrays.
    """
    path = os.path.join(run_dir, f"snap_{step:06d}_{agent_id}.json")
    _require_file(path)
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(payload, dict) or set(payload) != SNAPSHOT_KEYS:
        raise SchemaError(
            f"{path}: top-level keys must be {sorted(SNAPSHOT_KEYS)},"
            f" got {sorted(payload) if isinstance(payload, dict) else type(payload).__name__}"
        )
    if payload["step"] != step:
        raise SchemaError(f"{path}: step field {payload['step']!r} does not"
                          f" match filename step {step}")
    agent = payload["agent"]
    if not isinstance(agent, dict) or set(agent) != AGENT_KEYS:
        raise SchemaError(
            f"{path}: 'agent' keys must be {sorted(AGENT_KEYS)},"
            f" got {sorted(agent) if isinstance(agent, dict) else type(agent).__name__}"
        )
    A = _as_array(path, agent["A"], "agent.A", 2)
    C = _as_array(path, agent["C"], "agent.C", 1)
    C_scores = _as_array(path, agent["C_scores"], "agent.C_scores", 1)
    phi = _as_array(path, agent["phi"], "agent.phi", 1)
    E = _as_array(path, payload["E"], "E", 2)
    if C.shape[0] != A.shape[0]:
        raise SchemaError(f"{path}: agent.C has length {C.shape[0]} but"
                          f" agent.A has {A.shape[0]} rows")
    if C_scores.shape != C.shape:
        raise SchemaError(f"{path}: agent.C_scores shape {C_scores.shape}"
                          f" does not match agent.C shape {C.shape}")
    if phi.shape[0] != A.shape[1]:
        raise SchemaError(f"{path}: agent.phi has length {phi.shape[0]} but"
                          f" agent.A has {A.shape[1]} columns")
    if E.shape[0] != N_ACTIONS:
        raise SchemaError(f"{path}: E must have {N_ACTIONS} action rows,"
                          f" got shape {E.shape}")
    return {"step": step, "A": A, "C": C, "C_scores": C_scores,
            "phi": phi, "E": E}
