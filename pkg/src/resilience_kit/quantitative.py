"""Lyapunov-pair reach-time and slowdown bounds.

For a Hurwitz state matrix and any pair P, Q > 0 with A'P + PA = -Q, four
norm extrema of the input sets yield closed-form bounds on the minimal
reach times of the intact and damaged systems, and on the worst-case
slowdown ratio. Tight pairs come from random sampling plus a maximal-volume
inscribed ellipsoid of the control-deficit set.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import zonotope as zn
from .errors import CapacityError, PreconditionError, RankError
from .linalg import p_norm, solve_lyapunov
from .zonotope import Zonotope

# Sign-pattern enumeration cap for the exact box/zonotope norm maxima.
ENUM_CAP = 20

# Default RNG seed for pair sampling (overridable per call or via the CLI).
DEFAULT_SEED = 12345


def _chol_factor(P: np.ndarray) -> np.ndarray:
    """M with P = M' M (upper Cholesky factor)."""
    P = np.asarray(P, dtype=float)
    try:
        L = np.linalg.cholesky(0.5 * (P + P.T))
    except np.linalg.LinAlgError as exc:
        raise PreconditionError("P is not positive definite") from exc
    return L.T


def b_max(P: np.ndarray, B_bar: np.ndarray) -> float:
    """Exact max of ||B_bar u||_P over the unit box (attained at a vertex)."""
    B_bar = np.atleast_2d(np.asarray(B_bar, dtype=float))
    m = B_bar.shape[1]
    if m > ENUM_CAP:
        raise CapacityError(f"{m} inputs exceed the vertex enumeration cap {ENUM_CAP}")
    M = _chol_factor(P)
    MB = M @ B_bar
    best = 0.0
    for signs in itertools.product((-1.0, 1.0), repeat=m):
        best = max(best, float(np.linalg.norm(MB @ np.array(signs))))
    return best


def _coordinate_descent_qp(H: np.ndarray, free: list[int], x: np.ndarray,
                           tol: float = 1e-10, max_sweeps: int = 500) -> np.ndarray:
    """Minimize x'Hx over x[free] in [-1,1], other coordinates pinned."""
    prev = float(x @ H @ x)
    for _ in range(max_sweeps):
        for i in free:
            # Unconstrained minimizer in coordinate i, clipped to the box.
            hii = H[i, i]
            if hii <= 0:
                continue
            gi = H[i, :] @ x - hii * x[i]
            x[i] = float(np.clip(-gi / hii, -1.0, 1.0))
        val = float(x @ H @ x)
        if prev - val <= tol * max(1.0, prev):
            break
        prev = val
    return x


def b_min(P: np.ndarray, B_bar: np.ndarray) -> float:
    """Largest r with the P-ball of radius r inside the full input set.

    This is the P-norm inradius of the zonotope B_bar applied to the unit
    box, the exact constant needed by the steering construction behind the
    nominal upper reach-time bound. Rank-deficient B_bar makes the set flat
    and the value 0 (the derived bound is then void).

    Note the per-facet box minimum min ||B_bar u||_P over the box boundary
    is NOT this quantity when B_bar has a nontrivial kernel (inputs can
    cancel, driving that minimum to 0 while the set inradius stays
    positive); b_min_box computes it for cross-checks.
    """
    B_bar = np.atleast_2d(np.asarray(B_bar, dtype=float))
    n = B_bar.shape[0]
    if np.linalg.matrix_rank(B_bar) < n:
        return 0.0
    return z_min(P, Zonotope(np.zeros(n), B_bar))


def b_min_box(P: np.ndarray, B_bar: np.ndarray) -> float:
    """Min of ||B_bar u||_P over the unit-box boundary (facet-pinned QPs).

    One convex quadratic per facet (a coordinate pinned to +/-1), solved by
    projected coordinate descent. Coincides with b_min when B_bar is
    injective; can be 0 for wide B_bar.
    """
    B_bar = np.atleast_2d(np.asarray(B_bar, dtype=float))
    n, m = B_bar.shape
    M = _chol_factor(P)
    MB = M @ B_bar
    H = MB.T @ MB
    best = math.inf
    for k in range(m):
        free = [i for i in range(m) if i != k]
        # By symmetry the +1 and -1 facets give the same value.
        x = np.zeros(m)
        x[k] = 1.0
        x = _coordinate_descent_qp(H, free, x)
        best = min(best, float(np.sqrt(max(0.0, x @ H @ x))))
    return best


def z_max(P: np.ndarray, Z: Zonotope) -> float:
    """Exact max of ||z||_P over a zonotope (attained at a vertex)."""
    q = Z.num_generators
    if q > ENUM_CAP:
        raise CapacityError(f"{q} generators exceed the vertex enumeration cap {ENUM_CAP}")
    M = _chol_factor(P)
    c = M @ Z.center
    MG = M @ Z.generators
    if q == 0:
        return float(np.linalg.norm(c))
    best = 0.0
    for signs in itertools.product((-1.0, 1.0), repeat=q):
        best = max(best, float(np.linalg.norm(c + MG @ np.array(signs))))
    return best


def z_max_points(P: np.ndarray, points: np.ndarray) -> float:
    """Max of ||x||_P over a finite point set (e.g. polytope vertices)."""
    M = _chol_factor(P)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return float(np.max(np.linalg.norm(pts @ M.T, axis=1)))


def z_min(P: np.ndarray, Z: Zonotope) -> float:
    """P-norm inradius of a centered full-dimensional zonotope.

    Transforms by the Cholesky factor of P and returns the smallest
    Euclidean facet distance of the transformed zonotope.
    """
    if not Z.is_centered(1e-9):
        raise PreconditionError("inradius requires a centered zonotope")
    M = _chol_factor(P)
    W = zn.linear_map(M, Z)
    H = zn.facets(W)  # raises RankError when flat
    dists = H.offsets / np.linalg.norm(H.normals, axis=1)
    return float(np.min(dists))


@dataclass
class LyapunovPair:
    """P, Q > 0 with A'P + PA = -Q plus the derived norm extrema."""

    P: np.ndarray
    Q: np.ndarray
    lam_min_P: float
    lam_max_P: float
    lam_min_Q: float
    lam_max_Q: float
    b_max_P: float | None = None
    b_min_P: float | None = None
    z_max_P: float | None = None
    z_min_P: float | None = None
    pair_id: str = ""


def _populate_extrema(pair: LyapunovPair, B_bar, Z, Z_outer_points) -> LyapunovPair:
    """Fill the norm extrema used by the bound formulas.

    z_min comes from the inner zonotope (a ball inside the inner set is
    inside the true set, so the steering bounds stay valid). z_max must
    dominate the norm over the TRUE deficit set, so it uses the outer
    vertex set when available; the inner value would understate the
    adversary's reach and inflate the damaged-system lower bound.
    """
    P = pair.P
    if B_bar is not None:
        pair.b_max_P = b_max(P, B_bar)
        pair.b_min_P = b_min(P, B_bar)
    if Z_outer_points is not None:
        pair.z_max_P = z_max_points(P, Z_outer_points)
    elif Z is not None:
        pair.z_max_P = z_max(P, Z)
    if Z is not None:
        try:
            pair.z_min_P = z_min(P, Z)
        except RankError:
            pair.z_min_P = None
    return pair


def make_pair(A: np.ndarray, Q: np.ndarray, B_bar=None, Z: Zonotope | None = None,
              Z_outer_points: np.ndarray | None = None,
              pair_id: str = "") -> LyapunovPair:
    """Solve the Lyapunov equation and populate whatever extrema apply."""
    P = solve_lyapunov(A, Q)
    eP = np.linalg.eigvalsh(0.5 * (P + P.T))
    eQ = np.linalg.eigvalsh(0.5 * (np.asarray(Q) + np.asarray(Q).T))
    pair = LyapunovPair(P=P, Q=np.asarray(Q, dtype=float),
                        lam_min_P=float(eP[0]), lam_max_P=float(eP[-1]),
                        lam_min_Q=float(eQ[0]), lam_max_Q=float(eQ[-1]),
                        pair_id=pair_id)
    return _populate_extrema(pair, B_bar, Z, Z_outer_points)


def from_pair_P(A: np.ndarray, P: np.ndarray, B_bar=None, Z: Zonotope | None = None,
                Z_outer_points: np.ndarray | None = None,
                pair_id: str = "") -> LyapunovPair:
    """Build a pair from a given P by setting Q = -(A'P + PA)."""
    P = np.asarray(P, dtype=float)
    Q = -(A.T @ P + P @ A)
    Q = 0.5 * (Q + Q.T)
    eQ = np.linalg.eigvalsh(Q)
    if eQ[0] <= 0:
        raise PreconditionError("derived Q is not positive definite")
    eP = np.linalg.eigvalsh(0.5 * (P + P.T))
    pair = LyapunovPair(P=P, Q=Q,
                        lam_min_P=float(eP[0]), lam_max_P=float(eP[-1]),
                        lam_min_Q=float(eQ[0]), lam_max_Q=float(eQ[-1]),
                        pair_id=pair_id)
    return _populate_extrema(pair, B_bar, Z, Z_outer_points)


def _time_lower(pair: LyapunovPair, x0_P: float, beta: float) -> float:
    a = pair.lam_max_Q / (2.0 * pair.lam_min_P)
    return math.log(1.0 + a * x0_P / beta) / a


def _time_upper(pair: LyapunovPair, x0_P: float, kappa: float) -> float:
    g = pair.lam_min_Q / (2.0 * pair.lam_max_P)
    return math.log(1.0 + g * x0_P / kappa) / g


def reach_time_bounds(pair: LyapunovPair, x0) -> tuple[tuple[float, float], tuple[float, float]]:
    """Closed-form bounds ((T_N_lo, T_N_hi), (T_M_lo, T_M_hi)) at x0.

    Unmet hypotheses (rank deficiency, flat control-deficit set) yield open
    endpoints: math.inf for an unavailable upper bound, 0.0 for an
    unavailable lower bound.
    """
    x0_P = p_norm(pair.P, np.asarray(x0, dtype=float))
    if x0_P == 0.0:
        return ((0.0, 0.0), (0.0, 0.0))
    tn_lo = _time_lower(pair, x0_P, pair.b_max_P) if pair.b_max_P else 0.0
    tn_hi = _time_upper(pair, x0_P, pair.b_min_P) if pair.b_min_P else math.inf
    tm_lo = _time_lower(pair, x0_P, pair.z_max_P) if pair.z_max_P else 0.0
    tm_hi = _time_upper(pair, x0_P, pair.z_min_P) if pair.z_min_P else math.inf
    return ((tn_lo, tn_hi), (tm_lo, tm_hi))


def rq_bounds(pair: LyapunovPair) -> tuple[float, float]:
    """Analytic slowdown-ratio bounds for one Lyapunov pair.

    The bounding function a*ln(1+b*s)/ln(1+c*s) of s = ||x0||_P runs
    monotonically between its s->0 limit a*b/c (the ratio of the input-set
    norm extrema) and its s->inf limit a (the eigenvalue ratio), so its
    infimum over initial states is the smaller of the two on each side.
    The upper endpoint is additionally clamped to 1 (losing authority
    cannot speed the system up).
    """
    lam_lo = (pair.lam_min_P * pair.lam_min_Q) / (pair.lam_max_P * pair.lam_max_Q)
    lam_hi = 1.0 / lam_lo
    lower = 0.0
    if pair.z_min_P and pair.b_max_P:
        lower = min(lam_lo, pair.z_min_P / pair.b_max_P)
    upper = math.inf
    if pair.z_max_P and pair.b_min_P:
        upper = min(lam_hi, pair.z_max_P / pair.b_min_P)
    upper = min(upper, 1.0)
    return (lower, upper)


def sample_pairs(A: np.ndarray, count: int, seed: int, B_bar=None,
                 Z: Zonotope | None = None,
                 Z_outer_points: np.ndarray | None = None) -> list[LyapunovPair]:
    """Deterministic random Lyapunov pairs: Q = G'G + eps*I, P from the solve.

    Each pair's stream is keyed by (seed, index) so evaluation order does
    not matter.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    pairs = []
    for i in range(count):
        rng = np.random.default_rng([int(seed), i])
        G = rng.standard_normal((n, n))
        Q = G.T @ G
        Q += 1e-6 * (np.trace(Q) / n) * np.eye(n)
        pairs.append(make_pair(A, Q, B_bar=B_bar, Z=Z,
                               Z_outer_points=Z_outer_points, pair_id=f"sample-{i}"))
    return pairs


def ellipsoid_fit_P(Z: Zonotope) -> np.ndarray:
    """P > 0 whose unit P-ball is the maximal-volume ellipsoid inscribed in Z.

    Solved as the classic log-det program over the facet representation, so
    the zonotope must be centered and full-dimensional.
    """
    import cvxpy as cp

    if not Z.is_centered(1e-9):
        raise PreconditionError("ellipsoid fit requires a centered zonotope")
    H = zn.facets(Z)  # raises RankError when flat
    n = Z.dim
    B = cp.Variable((n, n), PSD=True)
    cons = [cp.norm(B @ H.normals[i], 2) <= H.offsets[i] for i in range(H.offsets.size)]
    prob = cp.Problem(cp.Maximize(cp.log_det(B)), cons)
    try:
        prob.solve(solver=cp.CLARABEL, verbose=False)
    except cp.error.SolverError:
        prob.solve(solver=cp.SCS, verbose=False)
    if B.value is None:
        raise PreconditionError(f"inscribed ellipsoid solve failed: status {prob.status}")
    Bv = 0.5 * (B.value + B.value.T)
    # Ellipsoid {B u : ||u|| <= 1} equals the unit ball of P = (B B')^{-1}.
    P = np.linalg.inv(Bv @ Bv)
    return 0.5 * (P + P.T)


@dataclass
class BoundsReport:
    """Best-of-sample reach-time and slowdown intervals at one initial state."""

    x0: np.ndarray
    T_N_interval: tuple[float, float]
    T_M_interval: tuple[float, float]
    r_q_interval: tuple[float, float]
    best_pair_ids: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)


def best_bounds(pairs: list[LyapunovPair], x0) -> BoundsReport:
    """Tightest endpoints over a family of pairs."""
    x0 = np.asarray(x0, dtype=float)
    best = {
        "T_N_lower": (0.0, ""), "T_N_upper": (math.inf, ""),
        "T_M_lower": (0.0, ""), "T_M_upper": (math.inf, ""),
        "r_q_lower": (0.0, ""), "r_q_upper": (math.inf, ""),
    }
    for pair in pairs:
        (tn_lo, tn_hi), (tm_lo, tm_hi) = reach_time_bounds(pair, x0)
        rq_lo, rq_hi = rq_bounds(pair)
        for key, val, cmp in (
            ("T_N_lower", tn_lo, max), ("T_N_upper", tn_hi, min),
            ("T_M_lower", tm_lo, max), ("T_M_upper", tm_hi, min),
            ("r_q_lower", rq_lo, max), ("r_q_upper", rq_hi, min),
        ):
            if cmp(val, best[key][0]) == val and val != best[key][0]:
                best[key] = (val, pair.pair_id)
    flags = []
    if math.isinf(best["T_N_upper"][0]):
        flags.append("T_N upper bound unavailable (rank hypothesis unmet)")
    if math.isinf(best["T_M_upper"][0]):
        flags.append("T_M upper bound unavailable (interior hypothesis unmet)")
    rq_hi = best["r_q_upper"][0]
    if math.isinf(rq_hi):
        rq_hi = 1.0
        flags.append("r_q upper bound defaulted to 1")
    elif rq_hi >= 1.0:
        flags.append("r_q upper bound clamped to 1")
    return BoundsReport(
        x0=x0,
        T_N_interval=(best["T_N_lower"][0], best["T_N_upper"][0]),
        T_M_interval=(best["T_M_lower"][0], best["T_M_upper"][0]),
        r_q_interval=(best["r_q_lower"][0], rq_hi),
        best_pair_ids={k: v[1] for k, v in best.items()},
        flags=flags,
    )


def interpolated_pairs(A: np.ndarray, anchor: LyapunovPair,
                       partners: list[LyapunovPair], B_bar=None,
                       Z: Zonotope | None = None,
                       Z_outer_points: np.ndarray | None = None,
                       steps: int = 25) -> list[LyapunovPair]:
    """Pairs along convex combinations of trace-normalized P matrices.

    Valid Lyapunov pairs form a convex cone, so every combination is again
    a valid pair. Blending the inscribed-ellipsoid P (best set-ratio term)
    with well-conditioned sampled P's (best eigenvalue-ratio term) explores
    the trade-off between the two terms of the slowdown lower bound.
    """
    A = np.asarray(A, dtype=float)
    Pa = anchor.P / np.trace(anchor.P)
    out: list[LyapunovPair] = []
    for k, partner in enumerate(partners):
        Pb = partner.P / np.trace(partner.P)
        for t in np.linspace(0.0, 1.0, steps + 2)[1:-1]:
            Pt = (1.0 - t) * Pa + t * Pb
            out.append(from_pair_P(A, Pt, B_bar=B_bar, Z=Z,
                                   Z_outer_points=Z_outer_points,
                                   pair_id=f"interp-{k}-{t:.3f}"))
    return out


def quantitative_report(system, split, x0, samples: int = 1000,
                        seed: int = DEFAULT_SEED, refine: bool = True) -> BoundsReport:
    """Best reach-time and slowdown intervals for one actuator-loss split.

    Samples Lyapunov pairs, adds the inscribed-ellipsoid pair of the
    control-deficit set, optionally refines the family by convex
    interpolation, and returns the tightest endpoints with provenance.
    """
    from .resilience import compute_z_set

    zset = compute_z_set(split)
    if zset.is_empty:
        raise PreconditionError("control-deficit set is empty for this split")
    outer_pts = None
    if zset.outer is not None:
        outer_pts = zn.hpolytope_vertices(zset.outer)
    A = system.A
    pairs = sample_pairs(A, samples, seed, B_bar=system.B_bar, Z=zset.inner,
                         Z_outer_points=outer_pts)
    anchor = None
    try:
        P_ell = ellipsoid_fit_P(zset.inner)
        anchor = from_pair_P(A, P_ell, B_bar=system.B_bar, Z=zset.inner,
                             Z_outer_points=outer_pts, pair_id="ellipsoid")
        pairs.append(anchor)
    except (RankError, PreconditionError):
        pass
    if refine and anchor is not None:
        lam_lo = lambda p: (p.lam_min_P * p.lam_min_Q) / (p.lam_max_P * p.lam_max_Q)
        partners = sorted(pairs[:-1], key=lam_lo, reverse=True)[:10]
        pairs.extend(interpolated_pairs(A, anchor, partners, B_bar=system.B_bar,
                                        Z=zset.inner, Z_outer_points=outer_pts))
    return best_bounds(pairs, np.asarray(x0, dtype=float))
