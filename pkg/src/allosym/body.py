"""Ground-truth interoceptive environment.

The body state is a pair (energy, temperature), each on a 0..5 scale,
flattened to a 36-way observation index as ``6 * energy + temperature``.
Five actions move the state; Eat, Play and Sleep carry a stochastic
temperature drift. All coordinate changes saturate at the [0, 5] bounds,
so the chain never leaves the grid.
"""

import enum
from typing import NamedTuple

import numpy as np

N_LEVELS = 6
N_STATES = N_LEVELS * N_LEVELS
N_OBS = N_STATES

DRIFT_PROB = 0.2


class Action(enum.IntEnum):
    COOL = 0
    WARM = 1
    EAT = 2
    PLAY = 3
    SLEEP = 4


ACTION_NAMES = [a.name.capitalize() for a in Action]
N_ACTIONS = len(Action)

# (energy delta, deterministic temperature delta, has stochastic drift)
_EFFECTS = {
    Action.COOL: (-1, -1, False),
    Action.WARM: (-1, +1, False),
    Action.EAT: (+2, 0, True),
    Action.PLAY: (-1, 0, True),
    Action.SLEEP: (0, 0, True),
}


class BodyState(NamedTuple):
    energy: int
    temperature: int


def _clamp(v: int) -> int:
    return 0 if v < 0 else (N_LEVELS - 1 if v >= N_LEVELS else v)


def encode_index(state: BodyState) -> int:
    """Flatten (energy, temperature) to the 36-way observation index."""
    return N_LEVELS * state.energy + state.temperature


def decode_index(index: int) -> BodyState:
    """Inverse of :func:`encode_index`."""
    if not 0 <= index < N_STATES:
        raise ValueError(f"state index {index} outside [0, {N_STATES})")
    return BodyState(index // N_LEVELS, index % N_LEVELS)


def encode(state: BodyState) -> np.ndarray:
    """One-hot observation vector for a body state."""
    v = np.zeros(N_OBS)
    v[encode_index(state)] = 1.0
    return v


def _drift_delta(temperature: int) -> int:
    # cold half drifts colder, warm half drifts warmer
    return -1 if temperature <= 2 else +1


def step(state: BodyState, action: Action, rng: np.random.Generator) -> BodyState:
    """Apply one action. Consumes one uniform variate iff the action drifts."""
    de, dt, drifts = _EFFECTS[Action(action)]
    energy = _clamp(state.energy + de)
    temperature = state.temperature + dt
    if drifts and rng.random() < DRIFT_PROB:
        temperature += _drift_delta(state.temperature)
    return BodyState(energy, _clamp(temperature))


def random_state(rng: np.random.Generator) -> BodyState:
    """Uniform draw over all 36 states. Consumes one variate."""
    return decode_index(int(rng.integers(N_STATES)))


def true_transitions() -> np.ndarray:
    """Exact per-action transition matrices, shape (5, 36, 36).

    ``B[a][s_next, s_prev]`` is the probability that :func:`step` maps
    ``s_prev`` to ``s_next`` under action ``a``. Columns sum to 1; drift
    actions have at most two nonzero entries per column (0.8/0.2), which
    merge to a single 1.0 where the drift saturates onto the unchanged
    cell.
    """
    B = np.zeros((N_ACTIONS, N_STATES, N_STATES))
    for action in Action:
        de, dt, drifts = _EFFECTS[action]
        for s in range(N_STATES):
            e, t = decode_index(s)
            e2 = _clamp(e + de)
            if drifts:
                stay = encode_index(BodyState(e2, _clamp(t)))
                moved = encode_index(BodyState(e2, _clamp(t + _drift_delta(t))))
                B[action, stay, s] += 1.0 - DRIFT_PROB
                B[action, moved, s] += DRIFT_PROB
            else:
                B[action, encode_index(BodyState(e2, _clamp(t + dt))), s] = 1.0
    return B
