"""Zonotopic inner approximation of reachable sets and reach-time oracles.

The reduced dynamics x' = A x + z with z confined to a symmetric zonotope
admit an inner-approximating tube: each step maps the previous set through
e^{A dt} and adds the zonotope of one-step input integrals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import zonotope as zn
from .errors import CapacityError, PreconditionError
from .linalg import matrix_exponential
from .resilience import ControlSplit, LinearSystem, ZSet, compute_z_set
from .zonotope import Zonotope, minkowski_sum, singleton

# Tube steps keep every generator; cap guards against runaway growth.
GENERATOR_CAP = 5000

#: Returned by the time oracles when the target never enters the tube.
UNREACHED = None


@dataclass
class ReachTube:
    """Inner-approximating sets on the uniform grid i * (T / N)."""

    times: np.ndarray
    sets: list[Zonotope]
    x0: np.ndarray
    horizon: float
    steps: int


def step_input_zonotope(A: np.ndarray, dt: float, gens: np.ndarray) -> Zonotope:
    """Zonotope of one-step input integrals for piecewise-constant inputs.

    Generator i is the integral of e^{A s} g_i over [0, dt], evaluated
    through the block-matrix exponential so singular A needs no special
    casing.
    """
    A = np.asarray(A, dtype=float)
    gens = np.asarray(gens, dtype=float)
    if gens.ndim == 1:
        gens = gens[:, None]
    if dt <= 0:
        raise ValueError("dt must be positive")
    if gens.shape[1] == 0:
        raise ValueError("need at least one generator")
    n = A.shape[0]
    # exp([[A, I], [0, 0]] dt) has int_0^dt e^{A s} ds in its upper-right block.
    blk = np.zeros((2 * n, 2 * n))
    blk[:n, :n] = A
    blk[:n, n:] = np.eye(n)
    E = matrix_exponential(blk, dt)
    J = E[:n, n:]
    return Zonotope(np.zeros(n), J @ gens)


def reach_tube(A: np.ndarray, zset: ZSet, x0: np.ndarray, T: float, N: int) -> ReachTube:
    """Tube of inner approximations of the reachable set at i * T/N."""
    if zset.is_empty:
        raise PreconditionError("reach tube requires a nonempty input set")
    if T <= 0 or N < 1:
        raise ValueError("need T > 0 and N >= 1")
    x0 = np.asarray(x0, dtype=float).ravel()
    A = np.asarray(A, dtype=float)
    dt = T / N
    V = step_input_zonotope(A, dt, zset.inner.generators)
    Ed = matrix_exponential(A, dt)
    sets = [singleton(x0)]
    for _ in range(N):
        nxt = minkowski_sum(zn.linear_map(Ed, sets[-1]), V)
        if nxt.num_generators > GENERATOR_CAP:
            raise CapacityError(f"tube generator count exceeded {GENERATOR_CAP}")
        sets.append(nxt)
    times = np.linspace(0.0, T, N + 1)
    return ReachTube(times=times, sets=sets, x0=x0, horizon=T, steps=N)


def extent(tube: ReachTube, step: int, dim: int) -> tuple[float, float]:
    """Exact 1-D shadow [c_d - sum|g_d|, c_d + sum|g_d|] of a tube set."""
    Z = tube.sets[step]
    if not 0 <= dim < Z.dim:
        raise IndexError(f"dimension {dim} out of range")
    half = float(np.sum(np.abs(Z.generators[dim, :])))
    c = float(Z.center[dim])
    return (c - half, c + half)


def slice_extent(tube: ReachTube, step: int, dim: int,
                 pins: dict[int, float]) -> tuple[float, float] | None:
    """Range of one coordinate over the tube set restricted to pinned values.

    For example, the reachable roll-rate range among states with zero roll
    angle. None when no point of the set attains the pinned coordinates.
    """
    Z = tube.sets[step]
    return zn.slice_extent(Z, dim, pins)


def _first_containment_time(A, gens, x0, x_tg, dt, t_max, tol):
    """Smallest grid time with the target inside the inner tube set."""
    x0 = np.asarray(x0, dtype=float).ravel()
    x_tg = np.asarray(x_tg, dtype=float).ravel()
    if np.max(np.abs(x_tg - x0), initial=0.0) <= tol:
        return 0.0
    V = step_input_zonotope(A, dt, gens)
    Ed = matrix_exponential(np.asarray(A, dtype=float), dt)
    omega = singleton(x0)
    t = 0.0
    while t + dt <= t_max + 1e-12:
        omega = minkowski_sum(zn.linear_map(Ed, omega), V)
        if omega.num_generators > GENERATOR_CAP:
            raise CapacityError(f"tube generator count exceeded {GENERATOR_CAP}")
        t += dt
        if zn.contains_point(omega, x_tg, tol=tol):
            return t
    return UNREACHED


def min_time_upper_bound(A, zset: ZSet, x0, x_tg, dt: float, t_max: float,
                         tol: float = 1e-9):
    """Certified upper bound on the minimal reach time of the reduced system.

    Containment is tested only at grid points, so the result carries a
    +/- dt uncertainty; because the tube is an inner approximation, a
    returned time is a true upper bound. Returns UNREACHED when the target
    never enters the tube by t_max.
    """
    if dt <= 0 or t_max < dt:
        raise ValueError("need dt > 0 and t_max >= dt")
    if zset.is_empty:
        raise PreconditionError("empty input set")
    return _first_containment_time(A, zset.inner.generators, x0, x_tg, dt, t_max, tol)


def nominal_time_oracle(sys: LinearSystem, x0, x_tg, dt: float, t_max: float,
                        tol: float = 1e-9):
    """Reach-time oracle for the intact system (full input set)."""
    if dt <= 0 or t_max < dt:
        raise ValueError("need dt > 0 and t_max >= dt")
    return _first_containment_time(sys.A, sys.B_bar, x0, x_tg, dt, t_max, tol)


def malfunction_time_oracle(sys: LinearSystem, split: ControlSplit, x0, x_tg,
                            dt: float, t_max: float, tol: float = 1e-9):
    """Reach-time oracle for the reduced system after the actuator loss."""
    zset = compute_z_set(split)
    if zset.is_empty:
        raise PreconditionError("control-deficit set is empty for this split")
    return min_time_upper_bound(sys.A, zset, x0, x_tg, dt, t_max, tol=tol)
