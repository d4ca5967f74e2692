"""Numerically safe categorical-distribution primitives.

Probability vectors are plain 1-D float64 arrays; conditional tables are
2-D arrays whose *columns* are distributions (the column index is the
conditioning variable). Logs are natural (nats) and floored at
``LOG_FLOOR`` so that learned distributions with exact zeros never
produce -inf.

Random draws go through :func:`sample`, which consumes exactly one
uniform variate from the supplied generator per call. A simulation run
owns five generator streams, split from the run seed in a fixed order:
env-A, env-B, agent-A, agent-B, game. Streams are single-owner; never
share one across concurrent callers.
"""

import numpy as np

from .kernels import LOG_FLOOR

NORM_TOL = 1e-9


def floored_log(p: np.ndarray) -> np.ndarray:
    """Natural log with entries floored at LOG_FLOOR."""
    return np.log(np.maximum(p, LOG_FLOOR))


def normalize(v: np.ndarray) -> np.ndarray:
    """Scale a nonnegative vector to sum 1."""
    v = np.asarray(v, dtype=np.float64)
    total = v.sum()
    if total <= 0.0:
        raise ValueError("cannot normalize a vector with nonpositive mass")
    return v / total


def assert_categorical(p: np.ndarray, tol: float = NORM_TOL) -> None:
    """Raise unless ``p`` is a valid probability vector."""
    p = np.asarray(p)
    if p.ndim != 1:
        raise ValueError(f"expected 1-D probability vector, got shape {p.shape}")
    if np.any(p < 0):
        raise ValueError("negative probability entry")
    if abs(float(p.sum()) - 1.0) > tol:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")


def assert_stochastic_matrix(m: np.ndarray, tol: float = NORM_TOL) -> None:
    """Raise unless every column of ``m`` is a valid probability vector."""
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError(f"expected 2-D matrix, got shape {m.shape}")
    if np.any(m < 0):
        raise ValueError("negative matrix entry")
    sums = m.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        raise ValueError(f"column {bad[0]} sums to {sums[bad[0]]!r}, not 1")


def one_hot(index: int, dim: int) -> np.ndarray:
    """Unit vector with a single 1 at ``index``."""
    if not 0 <= index < dim:
        raise ValueError(f"index {index} outside [0, {dim})")
    v = np.zeros(dim)
    v[index] = 1.0
    return v


def softmax(scores: np.ndarray, temperature: float = 1.0) -> np.ndarray:
    """exp(scores/temperature), normalized. Order-preserving.

    Raises on non-finite scores or nonpositive temperature.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(scores)):
        raise ValueError("non-finite score")
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    z = scores / temperature
    e = np.exp(z - z.max())
    return e / e.sum()


def entropy(p: np.ndarray) -> float:
    """Shannon entropy in nats, with 0 log 0 = 0."""
    p = np.asarray(p, dtype=np.float64)
    mask = p > 0
    return float(-(p[mask] * np.log(p[mask])).sum())


def column_entropies(m: np.ndarray) -> np.ndarray:
    """Entropy of each column of a column-stochastic matrix."""
    m = np.asarray(m, dtype=np.float64)
    logs = np.where(m > 0, np.log(np.maximum(m, LOG_FLOOR)), 0.0)
    return -(m * logs).sum(axis=0)


def js_divergence(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon divergence in nats: ½KL(p‖m) + ½KL(q‖m), m=(p+q)/2.

    Symmetric; 0 iff p = q; at most log 2.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    m = 0.5 * (p + q)
    pm = p > 0
    qm = q > 0
    kl_p = float((p[pm] * np.log(p[pm] / m[pm])).sum())
    kl_q = float((q[qm] * np.log(q[qm] / m[qm])).sum())
    return 0.5 * kl_p + 0.5 * kl_q


def sample(p: np.ndarray, rng: np.random.Generator) -> int:
    """Draw one index from a categorical distribution.

    Consumes exactly one uniform variate; deterministic given the
    generator state.
    """
    p = np.asarray(p, dtype=np.float64)
    cdf = np.cumsum(p)
    u = rng.random() * cdf[-1]
    idx = int(np.searchsorted(cdf, u, side="right"))
    return min(idx, p.shape[0] - 1)


def split_streams(seed: int, n: int = 5) -> list[np.random.Generator]:
    """Spawn ``n`` independent generator streams from one seed.

    Fixed order used by a run: env-A, env-B, agent-A, agent-B, game.
    """
    seq = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(child)) for child in seq.spawn(n)]
