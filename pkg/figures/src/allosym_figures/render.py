"""The three figure kinds rendered from a run directory.

jsd_curve: preference-divergence trajectory from log.csv.
preference_heatmaps: per-agent preference vectors as energy x temperature
grids (energy 0 at the bottom, temperature 0 at the left), one column per
snapshot step.
interpretation_heatmaps: the shared symbol-to-action matrix per snapshot,
symbols as rows and the five labeled actions as columns.

Cell values are plotted exactly as stored in the snapshots; only the color
scale is shared across panels. Rendering never writes into the run
directory.
"""

import math
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import io
from .io import SchemaError

KINDS = ("jsd_curve", "preference_heatmaps", "interpretation_heatmaps")

ACTION_LABELS = ("Cool", "Warm", "Eat", "Play", "Sleep")


@dataclass(frozen=True)
class FigureSpec:
    run_dir: str
    kind: str
    steps: tuple = None   # None means every snapshot step in the run
    out_path: str = None  # None means <kind>.png in the working directory


def _resolve_steps(run_dir: str, requested) -> list:
    available = io.snapshot_steps(run_dir)
    if requested is None:
        return available
    requested = [int(s) for s in requested]
    missing = sorted(set(requested) - set(available))
    if missing:
        raise SchemaError(
            f"{run_dir}: requested snapshot steps {missing} not found;"
            f" available steps are {available}"
        )
    return requested


def _square_side(vector: np.ndarray, what: str) -> int:
    side = math.isqrt(vector.shape[0])
    if side * side != vector.shape[0]:
        raise SchemaError(f"{what} has length {vector.shape[0]},"
                          " which is not a square grid")
    return side


def render_jsd_curve(run_dir: str, out_path: str) -> None:
    frame = io.load_log(run_dir)
    per_step = int(frame["exchange"].max()) + 1
    x = frame["step"] + frame["exchange"] / per_step
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, frame["jsd_C"], lw=1.0)
    ax.set_xlabel("step")
    ax.set_ylabel("JSD between preference vectors")
    ax.set_ylim(bottom=0.0)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_preference_heatmaps(run_dir: str, steps, out_path: str) -> None:
    steps = _resolve_steps(run_dir, steps)
    grids = {}
    for step in steps:
        for aid in io.AGENT_IDS:
            snap = io.load_snapshot(run_dir, step, aid)
            side = _square_side(snap["C"], f"snapshot {step} agent {aid} C")
            # index convention: flat = side * energy + temperature
            grids[(aid, step)] = snap["C"].reshape(side, side)
    vmax = max(float(g.max()) for g in grids.values())
    fig, axes = plt.subplots(
        2, len(steps), figsize=(2.2 * len(steps) + 1.2, 4.6),
        squeeze=False, constrained_layout=True,
    )
    for row, aid in enumerate(io.AGENT_IDS):
        for col, step in enumerate(steps):
            ax = axes[row][col]
            image = ax.imshow(
                grids[(aid, step)], origin="lower", vmin=0.0, vmax=vmax,
                cmap="viridis",
            )
            ax.set_title(f"agent {aid}, step {step}", fontsize=9)
            if col == 0:
                ax.set_ylabel("energy")
            ax.set_xlabel("temperature")
    fig.colorbar(image, ax=[ax for row in axes for ax in row], shrink=0.8)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_interpretation_heatmaps(run_dir: str, steps, out_path: str) -> None:
    steps = _resolve_steps(run_dir, steps)
    panels = {}
    for step in steps:
        snap = io.load_snapshot(run_dir, step, io.AGENT_IDS[0])
        panels[step] = snap["E"].T   # rows symbols, columns actions
    n_symbols = next(iter(panels.values())).shape[0]
    fig, axes = plt.subplots(
        1, len(steps), figsize=(1.9 * len(steps) + 1.2, 4.8),
        squeeze=False, constrained_layout=True,
    )
    for col, step in enumerate(steps):
        ax = axes[0][col]
        image = ax.imshow(panels[step], vmin=0.0, vmax=1.0, cmap="viridis",
                          aspect="auto")
        ax.set_title(f"step {step}", fontsize=9)
        ax.set_xticks(range(len(ACTION_LABELS)))
        ax.set_xticklabels(ACTION_LABELS, rotation=60, fontsize=7)
        if col == 0:
            ax.set_ylabel("symbol")
            ax.set_yticks(range(n_symbols))
            ax.set_yticklabels(range(n_symbols), fontsize=7)
        else:
            ax.set_yticks([])
    fig.colorbar(image, ax=[ax for row in axes for ax in row], shrink=0.8)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render(spec: FigureSpec) -> str:
    """Render one figure; returns the image path written."""
    if spec.kind not in KINDS:
        raise ValueError(f"unknown figure kind {spec.kind!r}; choose from {KINDS}")
    out_path = spec.out_path or f"{spec.kind}.png"
    out_dir = os.path.dirname(out_path)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    if spec.kind == "jsd_curve":
        render_jsd_curve(spec.run_dir, out_path)
    elif spec.kind == "preference_heatmaps":
        render_preference_heatmaps(spec.run_dir, spec.steps, out_path)
    else:
        render_interpretation_heatmaps(spec.run_dir, spec.steps, out_path)
    return out_path
