import numpy as np
import pytest

from oracles import markov_blocks, random_minimal_system
from poleid.errors import RankDeficientError, TooShortError
from poleid.lti import StateSpace, markov_matrix
from poleid.markov_ls import (
    assemble_multi,
    assemble_single,
    estimate_multi,
    estimate_single,
    read_markov_csv,
    toeplitz_inputs,
    write_markov_csv,
)
from poleid.simulate import NoiseSpec, SingleTrajectory, TrajectoryBatch, simulate_batch, simulate_single

QUIET = NoiseSpec(sigma_u=1.0, sigma_w=0.0, sigma_v=0.0)
NOISY = NoiseSpec(sigma_u=1.0, sigma_w=1e-2, sigma_v=1e-2)


def _scalar_traj(u):
    u = np.asarray(u, dtype=float)[:, None]
    return SingleTrajectory(u, np.zeros_like(u))


def test_assemble_single_layout():
    data = assemble_single(_scalar_traj([1.0, 2.0, 3.0]), 2)
    np.testing.assert_array_equal(data.U, [[2.0, 1.0], [3.0, 2.0]])
    assert data.Y.shape == (2, 1)


def test_assemble_single_minimal_window():
    data = assemble_single(_scalar_traj([1.0, 2.0, 3.0, 4.0]), 4)
    np.testing.assert_array_equal(data.U, [[4.0, 3.0, 2.0, 1.0]])


def test_assemble_single_row_count(rng):
    u = rng.standard_normal((37, 2))
    traj = SingleTrajectory(u, rng.standard_normal((37, 3)))
    for K in (1, 5, 37):
        data = assemble_single(traj, K)
        assert data.U.shape == (38 - K, 2 * K) and data.Y.shape == (38 - K, 3)
        # block j of row r is u[r + K - 1 - j]
        np.testing.assert_array_equal(data.U[0, :2], u[K - 1])
        np.testing.assert_array_equal(data.U[-1, -2:], u[36 - K + 1])


def test_assemble_single_too_short():
    with pytest.raises(TooShortError):
        assemble_single(_scalar_traj([1.0, 2.0]), 3)


def test_toeplitz_layout():
    np.testing.assert_array_equal(toeplitz_inputs(np.array([[1.0], [2.0]])), [[1.0, 2.0], [0.0, 1.0]])
    np.testing.assert_array_equal(toeplitz_inputs(np.array([[1.0, 2.0]])), [[1.0], [2.0]])


def test_assemble_multi_shapes(rng):
    batch = TrajectoryBatch(rng.standard_normal((7, 4, 2)), rng.standard_normal((7, 4, 3)))
    data = assemble_multi(batch)
    assert data.U.shape == (8, 28) and data.Y.shape == (3, 28)
    np.testing.assert_array_equal(data.Y[:, 4:8], batch.y[1].T)
    np.testing.assert_array_equal(data.U[:, 4:8], toeplitz_inputs(batch.u[1]))


def test_single_nilpotent_exact(rng):
    # Shift register: A^2 = 0, so the truncation bias vanishes for K = 3.
    A = np.array([[0.0, 0.0], [1.0, 0.0]])
    ss = StateSpace(A, [[1.0], [0.0]], [[0.3, -0.8]])
    traj = simulate_single(ss, QUIET, 200, seed=1)
    g = estimate_single(traj, 3)
    np.testing.assert_allclose(g.G, markov_matrix(ss, 3).G, atol=1e-9)


def test_single_bias_equals_truncation_term(scalar):
    # With a = 0.5 the regression misses C A^{K-1} x_{k-K+1}; recompute it directly.
    K, T = 3, 400
    traj = simulate_single(scalar, QUIET, T, seed=8)
    g = estimate_single(traj, K)
    data = assemble_single(traj, K)
    x = np.zeros(T)
    for k in range(1, T):
        x[k] = 0.5 * x[k - 1] + traj.u[k - 1, 0]
    bias = 0.5 ** (K - 1) * x[:T - K + 1]
    expected = markov_matrix(scalar, K).G + np.linalg.lstsq(data.U, bias, rcond=None)[0][None, :]
    np.testing.assert_allclose(g.G, expected, atol=1e-10)
    assert np.linalg.norm(g.G - markov_matrix(scalar, K).G) > 1e-3


def test_single_rank_deficient(stable):
    traj = simulate_single(stable, NOISY, 20, seed=1)
    with pytest.raises(RankDeficientError):
        estimate_single(traj, 15)


def test_multi_noiseless_exact(stable):
    batch = simulate_batch(stable, QUIET, 15, 20, seed=4)
    g = estimate_multi(batch)
    np.testing.assert_allclose(g.G, markov_matrix(stable, 15).G, atol=1e-9)


def test_multi_noiseless_exact_random(rng):
    for _ in range(5):
        A, B, C = random_minimal_system(rng, 3, 2, 2)
        ss = StateSpace(A, B, C, rng.standard_normal((2, 2)))
        batch = simulate_batch(ss, QUIET, 6, 4, seed=int(rng.integers(1 << 30)))
        blocks = markov_blocks(A, B, C, ss.D, 6)
        np.testing.assert_allclose(estimate_multi(batch).G, np.hstack(blocks), atol=1e-9)


def test_multi_rank_deficient():
    ss = StateSpace(np.eye(2) * 0.5, np.eye(2), np.eye(2))
    batch = simulate_batch(ss, NOISY, 1, 1, seed=0)
    with pytest.raises(RankDeficientError):
        estimate_multi(batch)


def test_scaling_equivariance(stable):
    batch = simulate_batch(stable, NOISY, 15, 30, seed=2)
    g = estimate_multi(batch)
    g2 = estimate_multi(TrajectoryBatch(3.7 * batch.u, 3.7 * batch.y))
    np.testing.assert_allclose(g2.G, g.G, atol=1e-10)
    traj = simulate_single(stable, NOISY, 400, seed=2)
    s1 = estimate_single(traj, 15)
    s2 = estimate_single(SingleTrajectory(0.2 * traj.u, 0.2 * traj.y), 15)
    np.testing.assert_allclose(s2.G, s1.G, atol=1e-10)


def _median_err(stable, est, seeds):
    G = markov_matrix(stable, 15).G
    return np.median([np.linalg.norm(est(s).G - G, 2) for s in seeds])


def test_single_monte_carlo_monotone(stable):
    seeds = range(20)
    short = _median_err(stable, lambda s: estimate_single(simulate_single(stable, NOISY, 300, seed=s), 15), seeds)
    long = _median_err(stable, lambda s: estimate_single(simulate_single(stable, NOISY, 3000, seed=s), 15), seeds)
    assert long < short


def test_multi_monte_carlo_monotone(stable):
    seeds = range(20)
    few = _median_err(stable, lambda s: estimate_multi(simulate_batch(stable, NOISY, 15, 20, seed=s)), seeds)
    many = _median_err(stable, lambda s: estimate_multi(simulate_batch(stable, NOISY, 15, 200, seed=s)), seeds)
    assert many < few


def test_markov_csv_roundtrip(tmp_path, stable):
    g = markov_matrix(stable, 15)
    path = tmp_path / "g.csv"
    write_markov_csv(path, g)
    lines = path.read_text().splitlines()
    assert len(lines) == 2 and len(lines[0].split(",")) == 30
    np.testing.assert_array_equal(read_markov_csv(path, 2).G, g.G)
