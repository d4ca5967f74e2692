"""Run orchestration: the exchange loop, metrics, and artifacts.

Each time step the two agents talk. Under the default ``double_exchange``
scheme there are two exchanges per step with roles swapped, so each
agent acts (as listener) exactly once per step and each body advances
once per step; ``alternate_steps`` instead runs one exchange per step
with roles alternating between steps.

Within one exchange: both agents score symbols from their expected free
energies, the proposal is accepted or rejected, the listener samples an
action from the interpretation column of the used symbol, its body
advances, it observes the new state, updates its posterior and
likelihood counts, and the phase-gated preference or interpretation
update fires.
"""

import collections
import dataclasses
import json
import os
from dataclasses import dataclass

import numpy as np

from . import body, kernels, learning, naming_game, policy, probability
from .agent import infer_state, init_agent
from .config import RunConfig, resolve_out_dir

AGENT_IDS = ("A", "B")

CSV_COLUMNS = (
    "step", "exchange", "listener_id", "speaker_id", "w_sp", "w_li", "w_used",
    "accepted", "r", "action", "energy_A", "temp_A", "energy_B", "temp_B",
    "jsd_C", "acc_rate_200", "entA_A", "entA_B", "phase", "gate_sp",
)

ACCEPT_WINDOW = 200


@dataclass
class StepLog:
    step: int
    exchange: int
    listener_id: str
    speaker_id: str
    w_sp: int
    w_li: int
    w_used: int
    accepted: bool
    r: float
    action: int
    energy_A: int
    temp_A: int
    energy_B: int
    temp_B: int
    jsd_C: float
    acc_rate_200: float
    entA_A: float
    entA_B: float
    phase: str
    gate_sp: bool


@dataclass
class RunResult:
    cfg: RunConfig
    logs: list
    agents: dict
    E: np.ndarray
    bodies: dict
    snapshots: list   # one dict per snapshot time, see Simulation.take_snapshot


class Simulation:
    """Mutable state of one run plus the per-exchange transition."""

    def __init__(self, cfg: RunConfig):
        cfg.validate()
        self.cfg = cfg
        self.lcfg = cfg.learning()
        streams = probability.split_streams(cfg.seed)
        self.rng_env = {"A": streams[0], "B": streams[1]}
        self.rng_agent = {"A": streams[2], "B": streams[3]}
        self.rng_game = streams[4]
        self.agents = {aid: init_agent(cfg, aid) for aid in AGENT_IDS}
        self.E = policy.uniform_interpretation(cfg.n_actions, cfg.n_symbols)
        self.bodies = {aid: body.random_state(self.rng_env[aid]) for aid in AGENT_IDS}
        self.t = 0
        self.accept_window = collections.deque(maxlen=ACCEPT_WINDOW)
        self.logs = []
        self.snapshots = []

    def run_exchange(self, listener_id: str, speaker_id: str, exchange_idx: int) -> StepLog:
        listener = self.agents[listener_id]
        speaker = self.agents[speaker_id]

        g_sp = policy.expected_free_energy(speaker)
        g_li = policy.expected_free_energy(listener)
        xi_sp = kernels.softmax(-(self.E.T @ g_sp), 1.0)
        xi_li = kernels.softmax(-(self.E.T @ g_li), 1.0)

        outcome = naming_game.exchange(
            xi_sp, xi_li,
            self.rng_agent[speaker_id], self.rng_agent[listener_id], self.rng_game,
        )

        action = policy.select_action(self.E, outcome.w_used, self.rng_agent[listener_id])
        self.bodies[listener_id] = body.step(
            self.bodies[listener_id], action, self.rng_env[listener_id]
        )
        obs_index = body.encode_index(self.bodies[listener_id])
        infer_state(listener, obs_index, action)
        learning.update_likelihood_counts(listener, obs_index, listener.phi)

        current_phase = learning.phase(self.t, self.lcfg)
        gate_sp = speaker.mean_H < self.lcfg.H_thres
        if current_phase == learning.C_PHASE:
            if not outcome.accepted:
                learning.update_preference(speaker, self.E, outcome.w_li, outcome.w_sp, self.lcfg)
        else:
            learning.update_interpretation(self.E, outcome.w_used, g_li, self.lcfg)

        self.accept_window.append(outcome.accepted)
        log = StepLog(
            step=self.t,
            exchange=exchange_idx,
            listener_id=listener_id,
            speaker_id=speaker_id,
            w_sp=outcome.w_sp,
            w_li=outcome.w_li,
            w_used=outcome.w_used,
            accepted=outcome.accepted,
            r=outcome.ratio,
            action=action,
            energy_A=self.bodies["A"].energy,
            temp_A=self.bodies["A"].temperature,
            energy_B=self.bodies["B"].energy,
            temp_B=self.bodies["B"].temperature,
            jsd_C=float(kernels.jsd(self.agents["A"].C, self.agents["B"].C)),
            acc_rate_200=sum(self.accept_window) / len(self.accept_window),
            entA_A=self.agents["A"].mean_H,
            entA_B=self.agents["B"].mean_H,
            phase=current_phase,
            gate_sp=gate_sp,
        )
        self.logs.append(log)
        return log

    def roles_for_step(self) -> list:
        """(listener, speaker, exchange index) tuples for the current step."""
        if self.cfg.role_scheme == "double_exchange":
            return [("A", "B", 0), ("B", "A", 1)]
        if self.t % 2 == 0:
            return [("A", "B", 0)]
        return [("B", "A", 0)]

    def step_once(self, on_exchange=None) -> None:
        for listener_id, speaker_id, idx in self.roles_for_step():
            log = self.run_exchange(listener_id, speaker_id, idx)
            if on_exchange is not None:
                on_exchange(self, log)
        self.t += 1

    def take_snapshot(self) -> dict:
        snap = {
            "step": self.t,
            "agents": {
                aid: {
                    "A": self.agents[aid].A.copy(),
                    "C": self.agents[aid].C.copy(),
                    "C_scores": self.agents[aid].C_scores.copy(),
                    "phi": self.agents[aid].phi.copy(),
                }
                for aid in AGENT_IDS
            },
            "E": self.E.copy(),
        }
        self.snapshots.append(snap)
        return snap


def run(cfg: RunConfig, on_exchange=None) -> RunResult:
    """Execute a full run in memory; artifacts are written separately."""
    sim = Simulation(cfg)
    sim.take_snapshot()
    for _ in range(cfg.total_steps):
        sim.step_once(on_exchange)
        if sim.t % cfg.snapshot_interval == 0:
            sim.take_snapshot()
    return RunResult(
        cfg=cfg, logs=sim.logs, agents=sim.agents, E=sim.E,
        bodies=sim.bodies, snapshots=sim.snapshots,
    )


def metrics_stream(logs: list, window: int = ACCEPT_WINDOW) -> dict:
    """Recompute the metric time series from raw log rows.

    Acceptance rate is rebuilt from the accepted flags over a trailing
    window; the state metrics are read off the rows.
    """
    if not logs:
        raise ValueError("metrics_stream needs at least one log row")
    accepted = np.array([log.accepted for log in logs], dtype=float)
    rate = np.empty(len(logs))
    acc_window = collections.deque(maxlen=window)
    for i, flag in enumerate(accepted):
        acc_window.append(flag)
        rate[i] = sum(acc_window) / len(acc_window)
    return {
        "step": np.array([log.step for log in logs]),
        "jsd_C": np.array([log.jsd_C for log in logs]),
        "acceptance_rate": rate,
        "entA_A": np.array([log.entA_A for log in logs]),
        "entA_B": np.array([log.entA_B for log in logs]),
    }


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(logs: list) -> str:
    lines = ["# columns: " + ",".join(CSV_COLUMNS), ",".join(CSV_COLUMNS)]
    for log in logs:
        row = dataclasses.asdict(log)
        lines.append(",".join(_fmt(row[col]) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _snapshot_json(snap: dict, agent_id: str) -> str:
    payload = {
        "step": snap["step"],
        "agent": {
            "A": snap["agents"][agent_id]["A"].tolist(),
            "C": snap["agents"][agent_id]["C"].tolist(),
            "C_scores": snap["agents"][agent_id]["C_scores"].tolist(),
            "phi": snap["agents"][agent_id]["phi"].tolist(),
        },
        "E": snap["E"].tolist(),
    }
    return json.dumps(payload, sort_keys=True)


def snapshot_filename(step: int, agent_id: str) -> str:
    return f"snap_{step:06d}_{agent_id}.json"


def write_artifacts(result: RunResult, out_dir: str) -> None:
    """Write meta.json, log.csv, and per-agent snapshot JSON files."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "meta.json"), "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"config": result.cfg.to_dict()}, sort_keys=True))
    with open(os.path.join(out_dir, "log.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_csv(result.logs))
    for snap in result.snapshots:
        for aid in AGENT_IDS:
            path = os.path.join(out_dir, snapshot_filename(snap["step"], aid))
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(_snapshot_json(snap, aid))


def run_and_write(cfg: RunConfig) -> str:
    """Run and persist; returns the output directory used."""
    out_dir = resolve_out_dir(cfg)
    result = run(cfg)
    write_artifacts(result, out_dir)
    return out_dir
