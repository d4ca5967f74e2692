"""Two interoceptive agents negotiating a shared symbol system.

Each agent regulates a 6x6 (energy, temperature) body by minimizing
expected free energy, exchanges symbols through a Metropolis-accepted
naming game, and learns its likelihood, its prior preference, and a
shared symbol-to-action interpretation online.
"""

from .agent import AgentModel, infer_state, init_agent, predict_obs, predict_obs_given_symbol
from .body import Action, BodyState, true_transitions
from .config import RunConfig, dumps_config, load_config
from .experiment import RunResult, Simulation, StepLog, metrics_stream, run, run_and_write
from .learning import LearningConfig
from .naming_game import ExchangeOutcome, exchange
from .policy import expected_free_energy, symbol_distribution, uniform_interpretation

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AgentModel",
    "BodyState",
    "ExchangeOutcome",
    "LearningConfig",
    "RunConfig",
    "RunResult",
    "Simulation",
    "StepLog",
    "dumps_config",
    "exchange",
    "expected_free_energy",
    "infer_state",
    "init_agent",
    "load_config",
    "metrics_stream",
    "predict_obs",
    "predict_obs_given_symbol",
    "run",
    "run_and_write",
    "symbol_distribution",
    "true_transitions",
    "uniform_interpretation",
    "__version__",
]
