"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

Every kernel below is written as a plain numpy function that is also valid
nopython numba code. At import time the module either JIT-compiles them
(default) or leaves them as-is, depending on the ``ALLOSYM_NUMBA``
environment variable:

    ALLOSYM_NUMBA=0   force the pure-numpy path
    unset / any other value   use numba when importable, numpy otherwise

``BACKEND`` reports which path is active. Both paths implement identical
arithmetic; ``benchmarks/bench_backends.py`` compares their speed.
"""

import os

import numpy as np

# Floor applied before taking logs of probabilities that may be exactly 0.
LOG_FLOOR = 1e-16


def _backend_choice() -> str:
    flag = os.environ.get("ALLOSYM_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def _py_softmax(scores, temperature):
    """exp(scores / temperature), normalized; shift-invariant."""
    z = scores / temperature
    m = z[0]
    for i in range(z.shape[0]):
        if z[i] > m:
            m = z[i]
    e = np.exp(z - m)
    return e / e.sum()


def _py_infer_state(a_mat, obs_idx, b_a, phi_prev):
    """Posterior over states after observing outcome ``obs_idx``.

    softmax of floored log-likelihood row plus floored log of the
    action-conditioned prediction ``b_a @ phi_prev``.
    """
    bphi = b_a @ phi_prev
    n_s = phi_prev.shape[0]
    scores = np.empty(n_s)
    for j in range(n_s):
        scores[j] = np.log(max(a_mat[obs_idx, j], LOG_FLOOR)) + np.log(
            max(bphi[j], LOG_FLOOR)
        )
    return _py_softmax(scores, 1.0)


def _py_efe_terms(b_stack, a_mat, col_h, phi, log_c):
    """Per-action ambiguity and risk.

    ambiguity[a] = (B_a phi) . col_h
    risk[a]      = sum_o q_o (log q_o - log_c_o),  q = A B_a phi
    """
    n_a = b_stack.shape[0]
    n_o = a_mat.shape[0]
    ambiguity = np.empty(n_a)
    risk = np.empty(n_a)
    for a in range(n_a):
        bphi = b_stack[a] @ phi
        q = a_mat @ bphi
        ambiguity[a] = bphi @ col_h
        acc = 0.0
        for o in range(n_o):
            qo = q[o]
            if qo > 0.0:
                acc += qo * (np.log(max(qo, LOG_FLOOR)) - log_c[o])
        risk[a] = acc
    return ambiguity, risk


def _py_likelihood_update(a_counts, a_mat, col_h, obs_idx, phi):
    """Add ``obs ⊗ phi`` to the count matrix, renormalize, refresh entropies.

    Mutates all three array arguments in place; returns the new mean
    column entropy.
    """
    n_o, n_s = a_counts.shape
    for j in range(n_s):
        a_counts[obs_idx, j] += phi[j]
    mean_h = 0.0
    for j in range(n_s):
        tot = 0.0
        for i in range(n_o):
            tot += a_counts[i, j]
        h = 0.0
        for i in range(n_o):
            p = a_counts[i, j] / tot
            a_mat[i, j] = p
            if p > 0.0:
                h -= p * np.log(max(p, LOG_FLOOR))
        col_h[j] = h
        mean_h += h
    return mean_h / n_s


def _py_column_entropies(m):
    """Entropy of every column of a column-stochastic matrix, in nats."""
    n_r, n_c = m.shape
    out = np.empty(n_c)
    for j in range(n_c):
        h = 0.0
        for i in range(n_r):
            p = m[i, j]
            if p > 0.0:
                h -= p * np.log(max(p, LOG_FLOOR))
        out[j] = h
    return out


def _py_jsd(p, q):
    """Jensen-Shannon divergence in nats; symmetric, in [0, log 2]."""
    n = p.shape[0]
    acc_p = 0.0
    acc_q = 0.0
    for i in range(n):
        m = 0.5 * (p[i] + q[i])
        if p[i] > 0.0:
            acc_p += p[i] * np.log(p[i] / m)
        if q[i] > 0.0:
            acc_q += q[i] * np.log(q[i] / m)
    return 0.5 * acc_p + 0.5 * acc_q


PY_IMPLS = {
    "softmax": _py_softmax,
    "infer_state": _py_infer_state,
    "efe_terms": _py_efe_terms,
    "likelihood_update": _py_likelihood_update,
    "column_entropies": _py_column_entropies,
    "jsd": _py_jsd,
}

BACKEND = _backend_choice()

if BACKEND == "numba":
    from numba import njit

    softmax = njit(cache=True)(_py_softmax)
    # kernels calling kernels must reference the jitted symbol
    _jit_softmax = softmax

    def _py_infer_state_jitsrc(a_mat, obs_idx, b_a, phi_prev):
        bphi = b_a @ phi_prev
        n_s = phi_prev.shape[0]
        scores = np.empty(n_s)
        for j in range(n_s):
            scores[j] = np.log(max(a_mat[obs_idx, j], LOG_FLOOR)) + np.log(
                max(bphi[j], LOG_FLOOR)
            )
        return _jit_softmax(scores, 1.0)

    infer_state = njit(cache=True)(_py_infer_state_jitsrc)
    efe_terms = njit(cache=True)(_py_efe_terms)
    likelihood_update = njit(cache=True)(_py_likelihood_update)
    column_entropies = njit(cache=True)(_py_column_entropies)
    jsd = njit(cache=True)(_py_jsd)
else:
    softmax = _py_softmax
    infer_state = _py_infer_state
    efe_terms = _py_efe_terms
    likelihood_update = _py_likelihood_update
    column_entropies = _py_column_entropies
    jsd = _py_jsd

ACTIVE_IMPLS = {
    "softmax": softmax,
    "infer_state": infer_state,
    "efe_terms": efe_terms,
    "likelihood_update": likelihood_update,
    "column_entropies": column_entropies,
    "jsd": jsd,
}


def warmup():
    """Trigger JIT compilation of every kernel on tiny inputs.

    No-op on the numpy backend. Call once before timing anything.
    """
    a = np.array([[0.7, 0.4], [0.3, 0.6]])
    phi = np.array([0.5, 0.5])
    b = np.eye(2)
    b_stack = np.stack((b, b))
    log_c = np.log(np.array([0.5, 0.5]))
    softmax(np.array([0.0, 1.0]), 1.0)
    infer_state(a, 0, b, phi)
    efe_terms(b_stack, a, column_entropies(a), phi, log_c)
    likelihood_update(a.copy() * 2, a.copy(), np.empty(2), 0, phi)
    jsd(phi, np.array([0.3, 0.7]))
