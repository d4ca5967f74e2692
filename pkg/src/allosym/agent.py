"""Per-agent generative model: beliefs, state inference, and prediction.

An agent holds a discrete POMDP over the 36 interoceptive states:
likelihood ``A`` (derived from Dirichlet counts ``a_counts``), per-action
transitions ``B`` (given the true environment dynamics), prior
preference ``C`` (softmax of the score vector ``C_scores``), initial
prior ``D``, and the current posterior ``phi``. ``col_H``, ``mean_H``
and ``log_C`` are caches kept consistent by the update routines in
:mod:`allosym.learning`.
"""

from dataclasses import dataclass, field

import numpy as np

from . import body, kernels, probability

# both agents prefer a mid-scale energy level
ENERGY_CENTER = 2.5


@dataclass
class AgentModel:
    agent_id: str
    A: np.ndarray          # (n_obs, n_states) likelihood, column-stochastic
    a_counts: np.ndarray   # (n_obs, n_states) Dirichlet counts behind A
    B: np.ndarray          # (n_actions, n_states, n_states) transitions
    C: np.ndarray          # (n_obs,) prior preference
    C_scores: np.ndarray   # (n_obs,) preference scores; C = softmax(C_scores)
    D: np.ndarray          # (n_states,) initial state prior
    phi: np.ndarray        # (n_states,) current posterior
    col_H: np.ndarray = field(default=None)   # cached column entropies of A
    mean_H: float = field(default=None)       # cached mean of col_H
    log_C: np.ndarray = field(default=None)   # cached floored log of C

    def __post_init__(self):
        if self.col_H is None:
            self.refresh_caches()

    def refresh_caches(self) -> None:
        self.col_H = probability.column_entropies(self.A)
        self.mean_H = float(self.col_H.mean())
        self.log_C = probability.floored_log(self.C)

    @property
    def n_obs(self) -> int:
        return self.A.shape[0]

    @property
    def n_states(self) -> int:
        return self.A.shape[1]

    @property
    def n_actions(self) -> int:
        return self.B.shape[0]


def preference_scores(beta_energy: float, beta_temp: float, temp_target: int) -> np.ndarray:
    """Score template peaked at mid energy and the given temperature.

    score(e, t) = -beta_energy * |e - 2.5| - beta_temp * |t - temp_target|,
    centered to zero mean so the scores are a canonical softmax preimage.
    """
    scores = np.empty(body.N_OBS)
    for e in range(body.N_LEVELS):
        for t in range(body.N_LEVELS):
            scores[body.N_LEVELS * e + t] = -beta_energy * abs(
                e - ENERGY_CENTER
            ) - beta_temp * abs(t - temp_target)
    return scores - scores.mean()


def init_agent(cfg, agent_id: str) -> AgentModel:
    """Fresh agent: uniform likelihood counts, true transitions, uniform D.

    ``cfg`` is a :class:`allosym.config.RunConfig`. Raises if its
    dimensions disagree with the fixed 6x6 / 5-action environment.
    """
    if (cfg.n_obs, cfg.n_states, cfg.n_actions) != (body.N_OBS, body.N_STATES, body.N_ACTIONS):
        raise ValueError(
            f"config dimensions ({cfg.n_obs}, {cfg.n_states}, {cfg.n_actions}) "
            f"do not match the environment ({body.N_OBS}, {body.N_STATES}, {body.N_ACTIONS})"
        )
    if agent_id not in ("A", "B"):
        raise ValueError(f"unknown agent id {agent_id!r}")
    a_counts = np.full((cfg.n_obs, cfg.n_states), float(cfg.init_count))
    A = a_counts / a_counts.sum(axis=0)
    temp_target = cfg.temp_target_a if agent_id == "A" else cfg.temp_target_b
    C_scores = preference_scores(cfg.beta_energy, cfg.beta_temp, temp_target)
    C = probability.softmax(C_scores, 1.0)
    D = np.full(cfg.n_states, 1.0 / cfg.n_states)
    return AgentModel(
        agent_id=agent_id,
        A=A,
        a_counts=a_counts,
        B=body.true_transitions(),
        C=C,
        C_scores=C_scores,
        D=D,
        phi=D.copy(),
    )


def infer_state(model: AgentModel, obs_index: int, prev_action: int) -> np.ndarray:
    """Posterior update after observing ``obs_index`` following ``prev_action``.

    Softmax of the floored log-likelihood row plus the floored log of the
    predicted prior ``B_a @ phi``; equals the normalized elementwise
    product of the two factors. Stores and returns the new posterior.
    """
    phi = kernels.infer_state(model.A, obs_index, model.B[prev_action], model.phi)
    model.phi = phi
    return phi


def predict_obs(model: AgentModel, action: int) -> np.ndarray:
    """Predicted observation distribution one step ahead: A @ (B_a @ phi)."""
    return model.A @ (model.B[action] @ model.phi)


def predict_obs_all_actions(model: AgentModel) -> np.ndarray:
    """Column-stacked one-step predictions, shape (n_obs, n_actions)."""
    return model.A @ (model.B @ model.phi).T


def predict_obs_given_symbol(model: AgentModel, E: np.ndarray, symbol: int) -> np.ndarray:
    """Prediction after interpreting ``symbol``: action-marginalized.

    sum_a E[a, symbol] * predict_obs(model, a) — a convex combination of
    the per-action predictions.
    """
    return predict_obs_all_actions(model) @ E[:, symbol]


def validate_agent(model: AgentModel, tol: float = probability.NORM_TOL) -> None:
    """Check every structural invariant; raises on the first violation."""
    probability.assert_stochastic_matrix(model.A, tol)
    if np.any(model.a_counts < 0):
        raise ValueError("negative Dirichlet count")
    if not np.allclose(model.A, model.a_counts / model.a_counts.sum(axis=0), atol=tol):
        raise ValueError("A is not the column normalization of a_counts")
    for a in range(model.n_actions):
        probability.assert_stochastic_matrix(model.B[a], tol)
    probability.assert_categorical(model.C, tol)
    if not np.allclose(model.C, probability.softmax(model.C_scores, 1.0), atol=tol):
        raise ValueError("C is not softmax(C_scores)")
    probability.assert_categorical(model.D, tol)
    probability.assert_categorical(model.phi, tol)
    if not np.allclose(model.col_H, probability.column_entropies(model.A), atol=tol):
        raise ValueError("stale column-entropy cache")
