"""Expected free energy and symbol scoring.

For each action the expected free energy decomposes into an ambiguity
term (expected entropy of the likelihood mapping under the predicted
state) and a risk term (KL divergence from the predicted observation
distribution to the prior preference). Symbols inherit scores through
the shared interpretation matrix ``E`` and are emitted from a softmax
over the negated scores.
"""

import numpy as np

from . import kernels, probability
from .agent import AgentModel


def efe_terms(model: AgentModel) -> tuple[np.ndarray, np.ndarray]:
    """Per-action (ambiguity, risk), each shape (n_actions,).

    ambiguity[a] = (B_a phi) . col_H(A)
    risk[a]      = KL(A B_a phi || C)
    """
    return kernels.efe_terms(model.B, model.A, model.col_H, model.phi, model.log_C)


def expected_free_energy(model: AgentModel) -> np.ndarray:
    """Total score per action: ambiguity + risk, shape (n_actions,)."""
    ambiguity, risk = efe_terms(model)
    return ambiguity + risk


def symbol_scores(model: AgentModel, E: np.ndarray) -> np.ndarray:
    """Action scores pushed through the interpretation: E.T @ g."""
    return E.T @ expected_free_energy(model)


def symbol_distribution(model: AgentModel, E: np.ndarray) -> np.ndarray:
    """Emission distribution over symbols: softmax of negated scores."""
    return kernels.softmax(-symbol_scores(model, E), 1.0)


def select_action(E: np.ndarray, symbol: int, rng: np.random.Generator) -> int:
    """Sample an action from the interpretation column for ``symbol``."""
    return probability.sample(E[:, symbol], rng)


def uniform_interpretation(n_actions: int, n_symbols: int) -> np.ndarray:
    """Interpretation matrix with every column uniform over actions."""
    return np.full((n_actions, n_symbols), 1.0 / n_actions)
