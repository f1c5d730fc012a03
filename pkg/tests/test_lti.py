import numpy as np
import pytest

from oracles import markov_blocks
from poleid import numerics
from poleid.errors import BadHorizonError, BadMassError, BadPartitionError, BadRankError, SizeMismatchError
from poleid.lti import (
    MarkovParams,
    SpringDamperParams,
    StateSpace,
    extended_matrices,
    hankel_from_markov,
    markov_matrix,
    spring_damper_continuous,
    zoh_discretize,
)


def test_statespace_dimension_checks():
    with pytest.raises(SizeMismatchError):
        StateSpace(np.eye(2), np.ones((3, 1)), np.ones((1, 2)))
    ss = StateSpace(np.eye(2), np.ones((2, 1)), np.ones((1, 2)))
    assert ss.D.shape == (1, 1) and not ss.D.any()
    with pytest.raises(ValueError):
        ss.A[0, 0] = 3.0


def test_stability_classes():
    assert StateSpace([[0.5]], [[1.0]], [[1.0]]).stability == "stable"
    assert StateSpace([[1.0]], [[1.0]], [[1.0]]).stability == "marginal"
    assert StateSpace([[1.01]], [[1.0]], [[1.0]]).stability == "unstable"


def test_statespace_roundtrip(stable):
    again = StateSpace.from_dict(stable.to_dict())
    for k in "ABCD":
        np.testing.assert_array_equal(getattr(again, k), getattr(stable, k))


def test_markov_nilpotent_order_one():
    ss = StateSpace(np.zeros((2, 2)), [[1.0, 0.0], [2.0, 1.0]], [[1.0, 1.0]], [[0.5, 0.25]])
    g = markov_matrix(ss, 4)
    np.testing.assert_array_equal(g.block(0), ss.D)
    np.testing.assert_array_equal(g.block(1), ss.C @ ss.B)
    assert not g.block(2).any() and not g.block(3).any()


def test_markov_scalar(scalar):
    np.testing.assert_allclose(markov_matrix(scalar, 3).G, [[0.0, 1.0, 0.5]])


def test_markov_stable_against_power_loop(stable):
    g = markov_matrix(stable, 15)
    ref = markov_blocks(stable.A, stable.B, stable.C, stable.D, 15)
    for k in range(15):
        np.testing.assert_allclose(g.block(k), ref[k], atol=1e-12)


def test_markov_bad_horizon(scalar):
    with pytest.raises(BadHorizonError):
        markov_matrix(scalar, 1)


def test_hankel_scalar():
    hs = hankel_from_markov(MarkovParams([[0.0, 1.0, 0.5]], 1), 1, 1, 1)
    np.testing.assert_allclose(hs.H, [[1.0, 0.5]])
    np.testing.assert_allclose(hs.Hminus, [[1.0]])
    np.testing.assert_allclose(hs.Hplus, [[0.5]])
    np.testing.assert_allclose(hs.L, [[1.0]])


def test_hankel_stable_exact_rank(stable):
    hs = hankel_from_markov(markov_matrix(stable, 15), 8, 6, 4)
    assert hs.H.shape == (16, 14) and hs.Hminus.shape == (16, 12)
    assert np.linalg.norm(hs.Hminus - hs.L, 2) <= 1e-10
    S = np.linalg.svd(hs.Hminus, compute_uv=False)
    assert S[3] > 0 and S[4] / S[3] <= 1e-8
    np.testing.assert_array_equal(hs.Hplus, hs.H[:, 2:])
    np.testing.assert_array_equal(hs.Hminus, hs.H[:, :-2])


def test_hankel_block_layout(stable):
    g = markov_matrix(stable, 15)
    hs = hankel_from_markov(g, 8, 6, 4)
    for i in range(8):
        for j in range(7):
            np.testing.assert_array_equal(hs.H[2 * i:2 * i + 2, 2 * j:2 * j + 2], g.block(i + j + 1))


def test_hankel_zero():
    hs = hankel_from_markov(MarkovParams(np.zeros((2, 30)), 2), 8, 6, 1)
    assert not hs.H.any() and not hs.L.any()


def test_hankel_errors(stable):
    g = markov_matrix(stable, 15)
    with pytest.raises(BadPartitionError):
        hankel_from_markov(g, 8, 5, 4)
    with pytest.raises(BadRankError):
        hankel_from_markov(g, 8, 6, 13)


def test_extended_factorization(stable):
    ext = extended_matrices(stable, 8, 6, 15)
    hs = hankel_from_markov(markov_matrix(stable, 15), 8, 6, 4)
    np.testing.assert_allclose(ext.O @ ext.Q, hs.H, atol=1e-10)
    assert ext.F.shape == (2, 60) and not ext.F[:, :4].any()


def test_extended_nilpotent():
    B = np.array([[1.0], [2.0]])
    C = np.array([[3.0, 4.0]])
    ext = extended_matrices(StateSpace(np.zeros((2, 2)), B, C), 3, 2, 4)
    np.testing.assert_array_equal(ext.O, np.vstack([C, np.zeros((2, 2))]))
    np.testing.assert_array_equal(ext.Q, np.hstack([B, np.zeros((2, 2))]))
    np.testing.assert_array_equal(ext.F, np.hstack([np.zeros((1, 2)), C, np.zeros((1, 4))]))


def test_extended_scalar(scalar):
    np.testing.assert_allclose(extended_matrices(scalar, 3, 1, 5).O, [[1.0], [0.5], [0.25]])


def test_spring_damper_stable_layout():
    Ac, Bc, Cc = spring_damper_continuous(SpringDamperParams(k1=0.5, k2=0.7, k3=0.6, c1=5, c2=5))
    np.testing.assert_allclose(Ac[1], [-1.2, -10.0, 0.7, 5.0])
    np.testing.assert_allclose(Bc, np.array([[0, 1, 0, 0], [0, 0, 0, 1]]).T)
    np.testing.assert_allclose(Cc, [[1, 0, 0, 0], [0, 0, 1, 0]])


def test_spring_damper_symmetry():
    # Only mass 1 has a wall damper, so mirror symmetry also needs c1 = 0.
    Ac, _, _ = spring_damper_continuous(SpringDamperParams(k1=0.4, k2=0.9, k3=0.4, c1=0, c2=2))
    P = np.zeros((4, 4))
    P[[0, 1, 2, 3], [2, 3, 0, 1]] = 1.0
    np.testing.assert_allclose(P @ Ac @ P.T, Ac)


def test_spring_damper_bad_mass():
    with pytest.raises(BadMassError):
        SpringDamperParams(m1=0.0)


def test_zoh_zero_dynamics():
    Bc = np.array([[1.0, 0.0], [0.5, 2.0]])
    ss = zoh_discretize(np.zeros((2, 2)), Bc, np.eye(2), 0.1)
    np.testing.assert_allclose(ss.A, np.eye(2))
    np.testing.assert_allclose(ss.B, 0.1 * Bc, rtol=1e-14)
    assert not ss.D.any()


def test_zoh_scalar():
    a, b, Ts = -1.3, 0.7, 0.25
    ss = zoh_discretize([[a]], [[b]], [[1.0]], Ts)
    np.testing.assert_allclose(ss.A, [[np.exp(a * Ts)]], rtol=1e-14)
    np.testing.assert_allclose(ss.B, [[(np.exp(a * Ts) - 1) / a * b]], rtol=1e-12)


def test_zoh_stable_spectrum():
    Ac, Bc, Cc = spring_damper_continuous(SpringDamperParams())
    ss = zoh_discretize(Ac, Bc, Cc, 0.1)
    mods = np.sort(np.abs(ss.poles()))[::-1]
    np.testing.assert_allclose(mods, [0.99, 0.95, 0.86, 0.27], atol=0.005)
    cont = np.exp(np.linalg.eigvals(Ac) * 0.1)
    for z in cont:
        assert np.min(np.abs(ss.poles() - z)) <= 1e-8


def test_zoh_markov_matches_recomputation():
    Ac, Bc, Cc = spring_damper_continuous(SpringDamperParams(c1=60.0))
    ss = zoh_discretize(Ac, Bc, Cc, 0.1)
    g = markov_matrix(ss, 6)
    Ad = numerics.expm(Ac * 0.1)
    for k in range(1, 6):
        np.testing.assert_allclose(g.block(k), Cc @ np.linalg.matrix_power(Ad, k - 1) @ ss.B, atol=1e-12)
