"""Reach tubes, coordinate extents, and reach-time oracles."""

import math

import numpy as np
import pytest

from resilience_kit import (
    UNREACHED,
    LinearSystem,
    compute_z_set,
    load_scenario,
    malfunction_time_oracle,
    min_time_upper_bound,
    nominal_time_oracle,
    reach_tube,
    split_system,
    step_input_zonotope,
)
from resilience_kit.errors import PreconditionError
from resilience_kit.reachability import extent, slice_extent
from resilience_kit.zonotope import contains_point


def _sys(A, B_bar):
    B_bar = np.asarray(B_bar, dtype=float)
    return LinearSystem(A=np.asarray(A, dtype=float), B_bar=B_bar,
                        actuator_labels=[f"u{i+1}" for i in range(B_bar.shape[1])],
                        state_labels=[f"x{i+1}" for i in range(B_bar.shape[0])])


def _zset(A_dim, B, C_col):
    B_bar = np.hstack([B, np.asarray(C_col, dtype=float).reshape(A_dim, 1)])
    sys = _sys(np.zeros((A_dim, A_dim)), B_bar)
    return compute_z_set(split_system(sys, [B_bar.shape[1] - 1]))


def test_step_input_zonotope_zero_dynamics():
    V = step_input_zonotope(np.zeros((2, 2)), 0.3, np.eye(2))
    assert np.allclose(V.generators, 0.3 * np.eye(2))
    assert np.allclose(V.center, 0.0)


def test_step_input_zonotope_diagonal_dynamics():
    a = -0.7
    dt = 0.5
    V = step_input_zonotope(np.array([[a]]), dt, np.array([[2.0]]))
    expected = 2.0 * (math.exp(a * dt) - 1.0) / a
    assert np.isclose(V.generators[0, 0], expected)


def test_step_input_zonotope_matches_quadrature():
    # Independent oracle: composite Simpson quadrature of e^{A s} g.
    from scipy.linalg import expm

    rng = np.random.default_rng(17)
    A = rng.standard_normal((3, 3))
    g = rng.standard_normal((3, 1))
    dt = 0.4
    m = 200
    s = np.linspace(0.0, dt, 2 * m + 1)
    vals = np.stack([expm(A * si) @ g[:, 0] for si in s])
    w = np.ones(2 * m + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    integral = (dt / (2 * m) / 3.0) * (w[:, None] * vals).sum(axis=0)
    V = step_input_zonotope(A, dt, g)
    assert np.allclose(V.generators[:, 0], integral, atol=1e-8)


def test_step_input_zonotope_validates_arguments():
    with pytest.raises(ValueError):
        step_input_zonotope(np.zeros((2, 2)), 0.0, np.eye(2))
    with pytest.raises(ValueError):
        step_input_zonotope(np.zeros((2, 2)), 0.1, np.zeros((2, 0)))


def test_reach_tube_pure_integrator_grows_linearly():
    # x' = z with z in [-0.75, 0.75] x [-1, 1]: at time t the reachable set
    # is exactly x0 + t * Z.
    zset = _zset(2, np.eye(2), [0.25, 0.0])
    x0 = np.array([1.0, -2.0])
    tube = reach_tube(np.zeros((2, 2)), zset, x0, T=2.0, N=4)
    assert len(tube.sets) == 5
    assert np.allclose(tube.times, [0.0, 0.5, 1.0, 1.5, 2.0])
    for i, t in enumerate(tube.times):
        lo, hi = extent(tube, i, 0)
        assert np.isclose(lo, 1.0 - 0.75 * t) and np.isclose(hi, 1.0 + 0.75 * t)
        lo, hi = extent(tube, i, 1)
        assert np.isclose(lo, -2.0 - t) and np.isclose(hi, -2.0 + t)


def test_reach_tube_inner_soundness_by_trajectory():
    # Any point of a tube set must be realizable by integrating the true
    # dynamics under an admissible piecewise-constant input signal.
    from scipy.integrate import solve_ivp

    rng = np.random.default_rng(4)
    A = np.array([[0.0, 1.0], [-1.0, -0.5]])
    zset = _zset(2, np.eye(2), [0.3, 0.1])
    x0 = np.array([0.5, 0.0])
    N = 4
    dt = 0.25
    tube = reach_tube(A, zset, x0, T=N * dt, N=N)
    Zf = tube.sets[N]
    q = zset.inner.num_generators
    assert Zf.num_generators == N * q
    alpha = rng.uniform(-1.0, 1.0, N * q)
    target = Zf.center + Zf.generators @ alpha
    # Step i uses the constant input sum_j alpha[iq + j] g_j.
    gens = zset.inner.generators
    x = x0.copy()
    for i in range(N):
        # Generators appended oldest-first get mapped through e^{A dt} each
        # step, so step i's block is the one multiplied (N-1-i) times.
        z = gens @ alpha[i * q:(i + 1) * q]
        sol = solve_ivp(lambda t, y: A @ y + z, (0.0, dt), x,
                        rtol=1e-11, atol=1e-12)
        x = sol.y[:, -1]
    assert np.linalg.norm(x - target) <= 1e-6 or _tube_point_realizable(
        A, gens, x0, alpha.reshape(N, q), dt, target)


def _tube_point_realizable(A, gens, x0, blocks, dt, target):
    """Retry with the opposite block-to-step association."""
    from scipy.integrate import solve_ivp

    x = x0.copy()
    for i in range(blocks.shape[0]):
        z = gens @ blocks[blocks.shape[0] - 1 - i]
        sol = solve_ivp(lambda t, y: A @ y + z, (0.0, dt), x,
                        rtol=1e-11, atol=1e-12)
        x = sol.y[:, -1]
    return np.linalg.norm(x - target) <= 1e-6


def test_reach_tube_rejects_empty_set_and_bad_grid():
    sys = _sys(np.zeros((2, 2)), np.eye(2))
    empty = compute_z_set(split_system(sys, [1]))
    with pytest.raises(PreconditionError):
        reach_tube(np.zeros((2, 2)), empty, np.zeros(2), 1.0, 2)
    zset = _zset(2, np.eye(2), [0.25, 0.0])
    with pytest.raises(ValueError):
        reach_tube(np.zeros((2, 2)), zset, np.zeros(2), -1.0, 2)
    with pytest.raises(ValueError):
        reach_tube(np.zeros((2, 2)), zset, np.zeros(2), 1.0, 0)


def test_slice_extent_wrapper_matches_zonotope_slice():
    import resilience_kit.zonotope as zn

    zset = _zset(2, np.array([[1.0, 0.5], [0.0, 1.0]]), [0.2, 0.1])
    tube = reach_tube(np.zeros((2, 2)), zset, np.zeros(2), T=1.0, N=3)
    got = slice_extent(tube, 3, 1, {0: 0.2})
    want = zn.slice_extent(tube.sets[3], 1, {0: 0.2})
    assert got == want


def test_min_time_scalar_matches_closed_form():
    # x' = -x + z, z in [-0.75, 0.75], from 1 to 0: the time-optimal input
    # z = -0.75 gives t* = ln((1 + 0.75) / 0.75).
    sys = _sys([[-1.0]], [[1.0, 0.25]])
    split = split_system(sys, [1])
    zset = compute_z_set(split)
    t_star = math.log(1.75 / 0.75)
    dt = 1e-3
    t = min_time_upper_bound(sys.A, zset, [1.0], [0.0], dt=dt, t_max=2.0)
    assert t is not UNREACHED
    assert t_star <= t <= t_star + 2 * dt


def test_min_time_zero_distance_is_zero():
    zset = _zset(2, np.eye(2), [0.25, 0.0])
    assert min_time_upper_bound(np.zeros((2, 2)), zset, [1.0, 2.0], [1.0, 2.0],
                                dt=0.1, t_max=1.0) == 0.0


def test_min_time_unreached_within_horizon():
    zset = _zset(2, np.eye(2), [0.25, 0.0])
    t = min_time_upper_bound(np.zeros((2, 2)), zset, [10.0, 0.0], [0.0, 0.0],
                             dt=0.5, t_max=3.0)
    assert t is UNREACHED


def test_oracles_order_nominal_before_malfunction():
    scn = load_scenario("double_integrator")
    split = split_system(scn.system, [1])
    x0, x_tg = [1.0, 0.0], [0.0, 0.0]
    t_n = nominal_time_oracle(scn.system, x0, x_tg, dt=0.05, t_max=10.0)
    t_m = malfunction_time_oracle(scn.system, split, x0, x_tg, dt=0.05, t_max=10.0)
    assert t_n is not UNREACHED and t_m is not UNREACHED
    assert t_n <= t_m + 1e-12


def test_malfunction_oracle_rejects_empty_deficit():
    sys = _sys(np.zeros((2, 2)), np.eye(2))
    with pytest.raises(PreconditionError):
        malfunction_time_oracle(sys, split_system(sys, [1]),
                                [1.0, 0.0], [0.0, 0.0], dt=0.1, t_max=1.0)


def test_tube_sets_contain_undisturbed_flow():
    # z = 0 is admissible, so e^{A t} x0 lies in every tube set.
    from scipy.linalg import expm

    A = np.array([[0.0, 1.0], [-2.0, -1.0]])
    zset = _zset(2, np.eye(2), [0.3, 0.0])
    x0 = np.array([1.0, 1.0])
    tube = reach_tube(A, zset, x0, T=1.5, N=5)
    for i, t in enumerate(tube.times):
        assert contains_point(tube.sets[i], expm(A * t) @ x0, tol=1e-7)
