"""Online parameter updates and the phase schedule that gates them.

Three quantities are learned during a run: the likelihood counts behind
``A`` (every observation), the preference scores behind ``C`` (speaker
side, only on rejected proposals, during C-phase, and only once the
speaker's likelihood is sharp enough), and the shared interpretation
``E`` (listener side, during E-phase). C-phase and E-phase alternate
every ``T_phase`` steps.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .agent import AgentModel, predict_obs_given_symbol
from .probability import floored_log, softmax

C_PHASE = "C"
E_PHASE = "E"


@dataclass
class LearningConfig:
    eta_C: float = 0.2        # preference learning rate
    eta_E: float = 0.3        # interpretation learning rate, in [0, 1]
    tau_E: float = 0.05       # softmax temperature for interpretation targets
    H_thres: float = 1.0      # entropy gate for preference updates, nats
    T_phase: int = 50         # steps per phase block
    first_phase: str = E_PHASE

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        # zero rates are allowed so frozen-parameter control runs work
        if self.eta_C < 0:
            raise ValueError(f"eta_C must be >= 0, got {self.eta_C}")
        if not 0 <= self.eta_E <= 1:
            raise ValueError(f"eta_E must be in [0, 1], got {self.eta_E}")
        if self.tau_E <= 0:
            raise ValueError(f"tau_E must be positive, got {self.tau_E}")
        if self.H_thres <= 0:
            raise ValueError(f"H_thres must be positive, got {self.H_thres}")
        if self.T_phase < 1:
            raise ValueError(f"T_phase must be >= 1, got {self.T_phase}")
        if self.first_phase not in (C_PHASE, E_PHASE):
            raise ValueError(f"first_phase must be 'C' or 'E', got {self.first_phase!r}")


def phase(t: int, cfg: LearningConfig) -> str:
    """Active phase at step ``t``: blocks of T_phase steps, alternating."""
    if (t // cfg.T_phase) % 2 == 0:
        return cfg.first_phase
    return E_PHASE if cfg.first_phase == C_PHASE else C_PHASE


def update_likelihood_counts(model: AgentModel, obs_index: int, phi: np.ndarray) -> AgentModel:
    """Add the outer product of the one-hot observation and ``phi``.

    Only the count row at ``obs_index`` changes; total count mass grows
    by exactly 1. ``A`` and the entropy caches are refreshed in place.
    """
    mean_h = kernels.likelihood_update(model.a_counts, model.A, model.col_H, obs_index, phi)
    model.mean_H = float(mean_h)
    return model


def update_preference(
    model_speaker: AgentModel,
    E: np.ndarray,
    w_listener: int,
    w_speaker: int,
    cfg: LearningConfig,
) -> bool:
    """Pull the speaker's preference toward the listener's symbol.

    The score delta is eta_C times the difference between the
    observation distributions the speaker predicts under the listener's
    symbol and under its own rejected one. No-op (returns False) while
    the speaker's mean likelihood-column entropy is at or above
    H_thres; the caller enforces the rejection and phase conditions.
    """
    if model_speaker.mean_H >= cfg.H_thres:
        return False
    delta = predict_obs_given_symbol(
        model_speaker, E, w_listener
    ) - predict_obs_given_symbol(model_speaker, E, w_speaker)
    model_speaker.C_scores = model_speaker.C_scores + cfg.eta_C * delta
    model_speaker.C = softmax(model_speaker.C_scores, 1.0)
    model_speaker.log_C = floored_log(model_speaker.C)
    return True


def update_interpretation(
    E: np.ndarray, w_used: int, g: np.ndarray, cfg: LearningConfig
) -> np.ndarray:
    """Blend column ``w_used`` of E toward softmax(-g / tau_E).

    Convex combination with weight eta_E; all other columns are left
    untouched. The caller enforces the E-phase condition.
    """
    target = kernels.softmax(-g / cfg.tau_E, 1.0)
    E[:, w_used] = (1.0 - cfg.eta_E) * E[:, w_used] + cfg.eta_E * target
    return E
