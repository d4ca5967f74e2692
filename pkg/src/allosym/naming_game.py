"""One symbol exchange with Metropolis acceptance.

The speaker proposes a symbol from its emission distribution; the
listener draws its own counter-symbol and accepts the proposal with
probability min(1, xi_listener[w_sp] / xi_listener[w_li]). Run over
many exchanges with fixed emission distributions, the accepted symbol
is a sample from the normalized product of the two distributions.
"""

from dataclasses import dataclass

import numpy as np

from . import probability


@dataclass(frozen=True)
class ExchangeOutcome:
    w_sp: int        # speaker's proposal
    w_li: int        # listener's own draw (the comparison point)
    w_used: int      # w_sp if accepted else w_li
    accepted: bool
    ratio: float     # xi_listener[w_sp] / xi_listener[w_li]


def propose(xi: np.ndarray, rng: np.random.Generator) -> int:
    """Draw a symbol from an emission distribution."""
    return probability.sample(xi, rng)


def acceptance_ratio(xi_listener: np.ndarray, w_sp: int, w_li: int) -> float:
    """Listener-side odds of the proposal against its own draw."""
    return float(xi_listener[w_sp] / xi_listener[w_li])


def exchange(
    xi_speaker: np.ndarray,
    xi_listener: np.ndarray,
    rng_speaker: np.random.Generator,
    rng_listener: np.random.Generator,
    rng_game: np.random.Generator,
    listener_symbol: int | None = None,
) -> ExchangeOutcome:
    """Run one exchange. Draw order is fixed: w_sp, w_li, then u.

    ``listener_symbol`` overrides the listener's draw (no variate is
    consumed from ``rng_listener`` then); passing the previous accepted
    symbol back in turns repeated exchanges into a Markov chain whose
    stationary law is normalize(xi_speaker * xi_listener).
    """
    w_sp = propose(xi_speaker, rng_speaker)
    if listener_symbol is None:
        w_li = propose(xi_listener, rng_listener)
    else:
        w_li = int(listener_symbol)
    ratio = acceptance_ratio(xi_listener, w_sp, w_li)
    u = float(rng_game.random())
    accepted = u < min(1.0, ratio)
    w_used = w_sp if accepted else w_li
    return ExchangeOutcome(w_sp=w_sp, w_li=w_li, w_used=w_used, accepted=accepted, ratio=ratio)


def product_target(xi_a: np.ndarray, xi_b: np.ndarray) -> np.ndarray:
    """Normalized elementwise product of two emission distributions."""
    return probability.normalize(xi_a * xi_b)
