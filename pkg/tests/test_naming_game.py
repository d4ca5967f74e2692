import numpy as np
import pytest

from allosym import naming_game, probability
from allosym.naming_game import acceptance_ratio, exchange, product_target, propose


def mh_transition_matrix(xi_sp, xi_li):
    """Explicit kernel of the persisted-listener chain, column = from-state.

    Off-diagonal mass is proposal times acceptance; the diagonal absorbs
    self-proposals and rejections.
    """
    n = xi_sp.size
    P = np.zeros((n, n))
    for w in range(n):
        for w2 in range(n):
            if w2 != w:
                P[w2, w] = xi_sp[w2] * min(1.0, xi_li[w2] / xi_li[w])
        P[w, w] = 1.0 - P[:, w].sum()
    return P


def test_acceptance_ratio_values():
    xi = np.array([0.5, 0.25, 0.125, 0.125])
    assert acceptance_ratio(xi, 0, 1) == pytest.approx(2.0, abs=1e-15)
    assert acceptance_ratio(xi, 1, 0) == pytest.approx(0.5, abs=1e-15)
    assert acceptance_ratio(xi, 3, 2) == pytest.approx(1.0, abs=1e-15)
    assert acceptance_ratio(xi, 2, 2) == pytest.approx(1.0, abs=1e-15)


def test_exchange_always_accepts_uphill_proposals():
    # listener weight of the proposal exceeds its own draw: ratio >= 1
    xi_sp = np.array([1.0, 0.0])
    xi_li = np.array([0.9, 0.1])
    for seed in range(20):
        out = exchange(
            xi_sp, xi_li,
            np.random.default_rng(seed),
            np.random.default_rng(seed + 100),
            np.random.default_rng(seed + 200),
        )
        assert out.w_sp == 0
        assert out.accepted
        assert out.w_used == 0


def test_exchange_rejection_keeps_listener_symbol():
    xi_sp = np.array([0.0, 1.0])
    xi_li = np.array([1.0 - 1e-12, 1e-12])
    rejected = 0
    for seed in range(50):
        out = exchange(
            xi_sp, xi_li,
            np.random.default_rng(seed),
            np.random.default_rng(seed + 100),
            np.random.default_rng(seed + 200),
            listener_symbol=0,
        )
        assert out.w_sp == 1
        assert out.w_li == 0
        if not out.accepted:
            rejected += 1
            assert out.w_used == 0
    assert rejected == 50   # ratio 1e-12 never wins


def test_exchange_variate_budget():
    # speaker: 1 draw, listener: 1 draw (0 if overridden), game: always 1
    xi = np.full(4, 0.25)

    def twin(seed):
        return np.random.default_rng(seed), np.random.default_rng(seed)

    r_sp, t_sp = twin(1)
    r_li, t_li = twin(2)
    r_g, t_g = twin(3)
    exchange(xi, xi, r_sp, r_li, r_g)
    t_sp.random(), t_li.random(), t_g.random()
    assert r_sp.random() == t_sp.random()
    assert r_li.random() == t_li.random()
    assert r_g.random() == t_g.random()

    r_sp, t_sp = twin(4)
    r_li, t_li = twin(5)
    r_g, t_g = twin(6)
    exchange(xi, xi, r_sp, r_li, r_g, listener_symbol=2)
    t_sp.random(), t_g.random()
    assert r_sp.random() == t_sp.random()
    assert r_li.random() == t_li.random()   # untouched
    assert r_g.random() == t_g.random()


def test_exchange_is_reproducible():
    xi_sp = np.array([0.1, 0.2, 0.3, 0.4])
    xi_li = np.array([0.4, 0.3, 0.2, 0.1])
    outs = [
        exchange(
            xi_sp, xi_li,
            np.random.default_rng(11),
            np.random.default_rng(22),
            np.random.default_rng(33),
        )
        for _ in range(2)
    ]
    assert outs[0] == outs[1]


def test_propose_matches_distribution():
    xi = np.array([0.7, 0.1, 0.2])
    rng = np.random.default_rng(0)
    freq = np.bincount([propose(xi, rng) for _ in range(30000)], minlength=3) / 30000
    assert np.max(np.abs(freq - xi)) < 0.01


def test_product_target_values():
    a = np.array([0.5, 0.25, 0.25])
    b = np.array([0.2, 0.2, 0.6])
    expected = np.array([0.1, 0.05, 0.15]) / 0.3
    assert np.allclose(product_target(a, b), expected, atol=1e-15)
    u = np.full(5, 0.2)
    assert np.allclose(product_target(u, u), u, atol=1e-15)


def test_persisted_chain_kernel_fixes_product_target():
    # the explicit transition matrix leaves normalize(xi_sp * xi_li) invariant
    rng = np.random.default_rng(5)
    for _ in range(20):
        xi_sp = rng.dirichlet(np.ones(6))
        xi_li = rng.dirichlet(np.ones(6))
        P = mh_transition_matrix(xi_sp, xi_li)
        assert np.allclose(P.sum(axis=0), 1.0, atol=1e-12)
        pi = product_target(xi_sp, xi_li)
        assert np.max(np.abs(P @ pi - pi)) < 1e-12


def test_persisted_chain_empirical_frequencies():
    xi_sp = np.array([0.05, 0.15, 0.3, 0.5])
    xi_li = np.array([0.4, 0.4, 0.1, 0.1])
    target = product_target(xi_sp, xi_li)
    rng_sp = np.random.default_rng(101)
    rng_g = np.random.default_rng(102)
    rng_unused = np.random.default_rng(103)
    w = 0
    counts = np.zeros(4)
    for _ in range(40000):
        out = exchange(xi_sp, xi_li, rng_sp, rng_unused, rng_g, listener_symbol=w)
        w = out.w_used
        counts[w] += 1
    tv = 0.5 * np.abs(counts / counts.sum() - target).sum()
    assert tv < 0.02


def test_outcome_is_frozen():
    out = naming_game.ExchangeOutcome(0, 1, 0, True, 2.0)
    with pytest.raises(AttributeError):
        out.w_sp = 3
