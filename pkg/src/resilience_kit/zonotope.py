"""Zonotope set algebra.

Zonotopes are stored as a center vector and a generator matrix (one
generator per column). The empty set is a distinct singleton marker, not a
degenerate zonotope.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import CapacityError, DimensionError, NumericalError, PreconditionError, RankError

# Dimension above which exact (facet-based) containment is not attempted.
EXACT_CONTAINMENT_MAX_DIM = 5
# Cap on the number of candidate facet normals C(q, n-1).
FACET_CAP = 100_000
# Cap on generator count for vertex enumeration.
VERTEX_CAP = 20
# Absolute deduplication tolerance for vertices.
VERTEX_DEDUP_TOL = 1e-9


class _EmptySet:
    """Singleton marker for the empty set (dimension convention -inf)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY_SET"


EMPTY_SET = _EmptySet()


@dataclass
class Zonotope:
    """Set {c + G @ a : a in [-1, 1]^q}; q = 0 denotes the singleton {c}."""

    center: np.ndarray
    generators: np.ndarray

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float).ravel()
        G = np.asarray(self.generators, dtype=float)
        if G.size == 0:
            G = G.reshape(self.center.size, 0)
        if G.ndim == 1:
            G = G[:, None]
        if G.shape[0] != self.center.size:
            raise DimensionError(
                f"generator rows {G.shape[0]} != center length {self.center.size}"
            )
        if not (np.all(np.isfinite(self.center)) and np.all(np.isfinite(G))):
            raise NumericalError("zonotope has non-finite entries")
        self.generators = G

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def num_generators(self) -> int:
        return self.generators.shape[1]

    def is_centered(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.center) <= tol))


@dataclass
class HPolytope:
    """Intersection of halfspaces {x : normals[i] @ x <= offsets[i]}."""

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        self.normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        self.offsets = np.asarray(self.offsets, dtype=float).ravel()
        if self.normals.shape[0] != self.offsets.size:
            raise DimensionError("normal/offset count mismatch")

    def contains(self, x: np.ndarray, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float).ravel()
        return bool(np.all(self.normals @ x <= self.offsets + tol))


def box_zonotope(n: int) -> Zonotope:
    """The unit box [-1, 1]^n."""
    if n < 1:
        raise DimensionError("box dimension must be >= 1")
    return Zonotope(np.zeros(n), np.eye(n))


def singleton(c: np.ndarray) -> Zonotope:
    c = np.asarray(c, dtype=float).ravel()
    return Zonotope(c, np.zeros((c.size, 0)))


def linear_map(M: np.ndarray, Z: Zonotope) -> Zonotope:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.shape[1] != Z.dim:
        raise DimensionError(f"matrix has {M.shape[1]} columns, zonotope dim is {Z.dim}")
    return Zonotope(M @ Z.center, M @ Z.generators)


def minkowski_sum(Za: Zonotope, Zb: Zonotope) -> Zonotope:
    if Za.dim != Zb.dim:
        raise DimensionError("dimension mismatch in Minkowski sum")
    return Zonotope(Za.center + Zb.center, np.hstack([Za.generators, Zb.generators]))


def support(Z: Zonotope, d: np.ndarray) -> float:
    """max{d @ x : x in Z} = d @ c + sum_i |d @ g_i|."""
    d = np.asarray(d, dtype=float).ravel()
    if d.size != Z.dim:
        raise DimensionError("direction dimension mismatch")
    if np.linalg.norm(d) == 0.0:
        raise ValueError("support direction must be nonzero")
    return float(d @ Z.center + np.sum(np.abs(d @ Z.generators)))


def project(Z: Zonotope, dims) -> Zonotope:
    dims = list(dims)
    if len(set(dims)) != len(dims):
        raise IndexError("projection indices must be distinct")
    for i in dims:
        if not 0 <= i < Z.dim:
            raise IndexError(f"projection index {i} out of range for dim {Z.dim}")
    return Zonotope(Z.center[dims], Z.generators[dims, :])


def _lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None):
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status not in (0, 2):  # 2 = infeasible is a meaningful answer
        raise NumericalError(f"LP solver failure: {res.message}")
    return res


def contains_point(Z: Zonotope, x: np.ndarray, tol: float = 1e-9) -> bool:
    """Feasibility LP: exists a in [-1,1]^q with c + G a = x, up to slack tol.

    Minimizes the infinity norm of the residual G a - (x - c); membership
    holds iff the optimum is <= tol.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.size != Z.dim:
        raise DimensionError("point dimension mismatch")
    r = x - Z.center
    q = Z.num_generators
    if q == 0:
        return bool(np.max(np.abs(r), initial=0.0) <= tol)
    # Variables: a (q), t (1). Minimize t s.t. -t <= (G a - r)_i <= t.
    n = Z.dim
    G = Z.generators
    A_ub = np.block([[G, -np.ones((n, 1))], [-G, -np.ones((n, 1))]])
    b_ub = np.concatenate([r, -r])
    c = np.zeros(q + 1)
    c[-1] = 1.0
    bounds = [(-1.0, 1.0)] * q + [(0.0, None)]
    res = _lp(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds)
    if res.status != 0:
        raise NumericalError(f"containment LP failed: {res.message}")
    return bool(res.fun <= tol)


def _generator_containment_budget(outer: Zonotope, inner: Zonotope) -> float:
    """Smallest per-row coefficient budget expressing inner through outer.

    Solves min t s.t. G_o Gamma = [G_i, c_i - c_o], sum_j |Gamma[k, j]| <= t.
    The inclusion inner <= outer is certified when the optimum is <= 1.
    Returns +inf when the equality system is infeasible.
    """
    qo = outer.num_generators
    n = outer.dim
    cols = np.hstack([inner.generators, (inner.center - outer.center)[:, None]])
    m = cols.shape[1]
    if qo == 0:
        return 0.0 if np.allclose(cols, 0.0, atol=1e-12) else np.inf
    # Variables: Gamma+ (qo*m), Gamma- (qo*m), t. Gamma = Gamma+ - Gamma-.
    nv = 2 * qo * m + 1
    # Equalities: for each target column j: G_o (Gp[:,j] - Gm[:,j]) = cols[:,j]
    A_eq = np.zeros((n * m, nv))
    b_eq = np.zeros(n * m)
    Go = outer.generators
    for j in range(m):
        rows = slice(j * n, (j + 1) * n)
        A_eq[rows, j * qo:(j + 1) * qo] = Go
        A_eq[rows, qo * m + j * qo: qo * m + (j + 1) * qo] = -Go
        b_eq[rows] = cols[:, j]
    # Row budgets: for each outer generator k: sum_j (Gp[k,j] + Gm[k,j]) <= t
    A_ub = np.zeros((qo, nv))
    for j in range(m):
        A_ub[:, j * qo:(j + 1) * qo] += np.eye(qo)
        A_ub[:, qo * m + j * qo: qo * m + (j + 1) * qo] += np.eye(qo)
    A_ub[:, -1] = -1.0
    b_ub = np.zeros(qo)
    c = np.zeros(nv)
    c[-1] = 1.0
    bounds = [(0.0, None)] * (2 * qo * m) + [(0.0, None)]
    res = _lp(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds)
    if res.status == 2:
        return np.inf
    return float(res.fun)


def affine_dimension(Z: Zonotope, tol: float = 1e-9) -> int:
    """Rank of the generator matrix."""
    if Z.num_generators == 0:
        return 0
    sv = np.linalg.svd(Z.generators, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def facets(Z: Zonotope) -> HPolytope:
    """H-representation by the standard (n-1)-subset normal construction.

    Requires a full-dimensional zonotope; raises RankError otherwise. For
    centered zonotopes the normals come in +/- pairs with equal offsets.
    """
    n = Z.dim
    q = Z.num_generators
    r = affine_dimension(Z)
    if r < n:
        raise RankError(f"zonotope is flat: affine dimension {r} < {n}")
    if n == 1:
        normals = np.array([[1.0], [-1.0]])
    else:
        if _ncr(q, n - 1) > FACET_CAP:
            raise CapacityError(f"facet enumeration too large: C({q},{n-1})")
        cand = []
        G = Z.generators
        for subset in itertools.combinations(range(q), n - 1):
            Gs = G[:, subset]
            if np.linalg.matrix_rank(Gs, tol=1e-12) < n - 1:
                continue
            # Normal spans the null space of Gs^T.
            _, _, vt = np.linalg.svd(Gs.T)
            nrm = vt[-1]
            cand.append(nrm)
            cand.append(-nrm)
        normals = _dedupe_rows(np.array(cand))
    offsets = np.array([support(Z, d) for d in normals])
    return HPolytope(normals, offsets)


def _dedupe_rows(rows: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if rows.size == 0:
        return rows
    keep = []
    for r in rows:
        if not any(np.linalg.norm(r - k) <= tol for k in keep):
            keep.append(r)
    return np.array(keep)


def _ncr(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def vertices(Z: Zonotope) -> np.ndarray:
    """All sign-pattern points c + G sigma; a superset of the vertex set."""
    q = Z.num_generators
    if q > VERTEX_CAP:
        raise CapacityError(f"{q} generators exceed the vertex enumeration cap {VERTEX_CAP}")
    if q == 0:
        return Z.center[None, :]
    pts = []
    for signs in itertools.product((-1.0, 1.0), repeat=q):
        pts.append(Z.center + Z.generators @ np.array(signs))
    pts = np.array(pts)
    # Deduplicate on a rounded key.
    keep: list[np.ndarray] = []
    for p in pts:
        if not any(np.max(np.abs(p - k)) <= VERTEX_DEDUP_TOL for k in keep):
            keep.append(p)
    return np.array(keep)


def polygon2d(Z: Zonotope, tol: float = 1e-12) -> np.ndarray:
    """Ordered boundary polygon of a 2-D zonotope (counterclockwise).

    Flips generators into the upper half-plane, sorts by angle, and walks
    the boundary; returns a (2q x 2) vertex array (a single row for a
    singleton).
    """
    if Z.dim != 2:
        raise DimensionError("polygon2d requires a 2-D zonotope")
    G = Z.generators
    G = G[:, np.linalg.norm(G, axis=0) > tol]
    q = G.shape[1]
    if q == 0:
        return Z.center[None, :]
    flip = (G[1] < 0) | ((G[1] == 0) & (G[0] < 0))
    G = G * np.where(flip, -1.0, 1.0)
    order = np.argsort(np.arctan2(G[1], G[0]))
    G = G[:, order]
    pts = [Z.center - G.sum(axis=1)]
    for i in range(q):
        pts.append(pts[-1] + 2.0 * G[:, i])
    for i in range(q - 1):
        pts.append(pts[-1] - 2.0 * G[:, i])
    return np.array(pts)


def slice_extent(Z: Zonotope, dim: int, pins: dict[int, float],
                 tol: float = 1e-9) -> tuple[float, float] | None:
    """Range of coordinate dim over the slice of Z with pinned coordinates.

    Solves two LPs over the generator coefficients; returns None when the
    slice is empty (no point of Z attains the pinned values).
    """
    if not 0 <= dim < Z.dim:
        raise DimensionError(f"dimension {dim} out of range")
    q = Z.num_generators
    pin_dims = sorted(pins)
    if q == 0:
        if all(abs(Z.center[d] - pins[d]) <= tol for d in pin_dims):
            return (float(Z.center[dim]), float(Z.center[dim]))
        return None
    A_eq = Z.generators[pin_dims, :]
    b_eq = np.array([pins[d] - Z.center[d] for d in pin_dims])
    g = Z.generators[dim, :]
    bounds = [(-1.0, 1.0)] * q
    vals = []
    for sign in (1.0, -1.0):
        res = linprog(sign * g, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
        if res.status == 2:  # infeasible: the slice is empty
            return None
        if not res.success:
            raise NumericalError(f"slice extent LP failed: {res.message}")
        vals.append(float(Z.center[dim] + g @ res.x))
    return (min(vals), max(vals))


def hpolytope_vertices(H: HPolytope, interior_point=None) -> np.ndarray:
    """Vertices of a bounded halfspace intersection with nonempty interior.

    interior_point defaults to the origin, which must then lie strictly
    inside (all offsets positive).
    """
    from scipy.spatial import HalfspaceIntersection

    n = H.normals.shape[1]
    if interior_point is None:
        if np.min(H.offsets) <= 0.0:
            raise PreconditionError("origin is not interior; pass interior_point")
        interior_point = np.zeros(n)
    halfspaces = np.hstack([H.normals, -H.offsets[:, None]])
    try:
        hi = HalfspaceIntersection(halfspaces, np.asarray(interior_point, dtype=float))
    except Exception as exc:  # qhull reports degeneracies via QhullError
        raise NumericalError(f"halfspace vertex enumeration failed: {exc}") from exc
    return np.asarray(hi.intersections, dtype=float)


def contains_zonotope(outer: Zonotope, inner: Zonotope, mode: str = "auto", tol: float = 1e-9) -> bool:
    """Zonotope-in-zonotope test.

    sufficient: generator-containment LP, sound but possibly incomplete.
    exact: support check against every facet of the outer H-representation;
    sound and complete, but needs a full-dimensional outer in low dimension.
    auto: exact when feasible, otherwise sufficient.
    """
    if outer.dim != inner.dim:
        raise DimensionError("dimension mismatch in containment test")
    if mode not in ("sufficient", "exact", "auto"):
        raise ValueError(f"unknown containment mode {mode!r}")
    if mode == "auto":
        if outer.dim <= EXACT_CONTAINMENT_MAX_DIM and affine_dimension(outer) == outer.dim:
            mode = "exact"
        else:
            mode = "sufficient"
    if mode == "exact":
        H = facets(outer)  # raises RankError / CapacityError when unusable
        for nrm, off in zip(H.normals, H.offsets):
            if support(inner, nrm) > off + tol:
                return False
        return True
    return _generator_containment_budget(outer, inner) <= 1.0 + tol


def separating_direction(outer: Zonotope, inner: Zonotope, tol: float = 1e-9):
    """A direction d with support(inner, d) > support(outer, d), or None.

    Certifies non-containment exactly: searches the candidate normals of the
    support-function test in the span of the union (handles flat sets).
    For symmetric pairs, checking generator directions of the concatenated
    set against the outer support is a complete test within the span; points
    outside the span are caught by a span-residual direction.
    """
    if outer.dim != inner.dim:
        raise DimensionError("dimension mismatch")
    # Direction leaving the span of the outer set (flat outer case).
    Go = outer.generators
    if Go.shape[1] > 0:
        U, s, _ = np.linalg.svd(Go, full_matrices=True)
        r = int(np.sum(s > 1e-12 * max(s[0], 1e-300))) if s.size else 0
    else:
        U = np.eye(outer.dim)
        r = 0
    for k in range(r, outer.dim):
        d = U[:, k]
        gap = support(inner, d) - (d @ outer.center)
        if gap > tol:
            return d
        gap = support(inner, -d) - (-d @ outer.center)
        if gap > tol:
            return -d
    # Within the span: facet normals of the outer restricted to the span.
    if r > 0:
        B = U[:, :r]
        out_r = Zonotope(B.T @ outer.center, B.T @ Go)
        in_r = Zonotope(B.T @ inner.center, B.T @ inner.generators)
        try:
            H = facets(out_r)
        except (RankError, CapacityError):
            H = None
        if H is not None:
            for nrm, off in zip(H.normals, H.offsets):
                if support(in_r, nrm) > off + tol:
                    return B @ nrm
            return None
    # Fall back to the sufficient test; no certificate available.
    if _generator_containment_budget(outer, inner) <= 1.0 + tol:
        return None
    raise NumericalError("cannot certify non-containment in this dimension")


def _is_axis_aligned(Z: Zonotope, tol: float = 1e-12) -> bool:
    G = Z.generators
    return all(np.sum(np.abs(g) > tol) <= 1 for g in G.T)


def _axis_widths(Z: Zonotope) -> np.ndarray:
    return np.sum(np.abs(Z.generators), axis=1)


def inner_minkowski_difference(Zm: Zonotope, Zs: Zonotope, tol: float = 1e-9):
    """Inner approximation of Zm (-) Zs for symmetric (centered) operands.

    Returns a symmetric zonotope G with G (+) Zs <= Zm, or EMPTY_SET when
    Zs is not contained in Zm. Exact for axis-aligned boxes; otherwise each
    generator of Zm is contracted as little as possible while keeping the
    sum containment certified (common-scale bisection, then per-generator
    refinement).
    """
    if Zm.dim != Zs.dim:
        raise DimensionError("dimension mismatch in Minkowski difference")
    if not (Zm.is_centered(1e-9) and Zs.is_centered(1e-9)):
        raise PreconditionError("inner Minkowski difference requires centered operands")
    if Zs.num_generators == 0:
        return Zonotope(Zm.center.copy(), Zm.generators.copy())
    if not contains_zonotope(Zm, Zs, mode="auto", tol=tol):
        return EMPTY_SET

    if _is_axis_aligned(Zm) and _is_axis_aligned(Zs):
        wm, ws = _axis_widths(Zm), _axis_widths(Zs)
        w = wm - ws
        if np.any(w < -tol):
            return EMPTY_SET
        w = np.clip(w, 0.0, None)
        # one generator per axis with positive residual width
        cols = [w[i] * np.eye(Zm.dim)[:, i] for i in range(Zm.dim) if w[i] > 0]
        gens = np.column_stack(cols) if cols else np.zeros((Zm.dim, 0))
        return Zonotope(np.zeros(Zm.dim), gens)

    G = Zm.generators
    n, q = G.shape

    exact_mode = n <= EXACT_CONTAINMENT_MAX_DIM and affine_dimension(Zm) == n
    if exact_mode:
        beta = _contract_exact(Zm, Zs, tol)
    else:
        beta = _contract_budget_lp(Zm, Zs, tol)

    keep = beta > 1e-9
    gens = G[:, keep] * beta[keep]
    return Zonotope(np.zeros(Zm.dim), gens)


def _contract_exact(Zm: Zonotope, Zs: Zonotope, tol: float) -> np.ndarray:
    """Largest per-generator scales under the facet certificate.

    With the facet normals d_k of Zm fixed, the containment of the scaled
    sum is the linear system sum_i beta_i |d_k'g_i| <= offset_k - h_Zs(d_k),
    so the common scale has a closed form and the refinement is monotone
    coordinate ascent, each update also in closed form.
    """
    G = Zm.generators
    q = G.shape[1]
    H = facets(Zm)
    A = np.abs(np.asarray(H.normals) @ G)            # facets x generators
    rem = np.asarray(H.offsets) - np.sum(np.abs(np.asarray(H.normals) @ Zs.generators), axis=1)
    rem = np.clip(rem, 0.0, None)
    row = A.sum(axis=1)
    mask = row > tol
    beta0 = min(1.0, float(np.min(rem[mask] / row[mask]))) if mask.any() else 1.0
    beta = np.full(q, beta0)
    for _ in range(50):
        changed = 0.0
        for i in range(q):
            ai = A[:, i]
            active = ai > tol
            if not active.any():
                beta[i] = 1.0
                continue
            slack = rem[active] - A[active] @ beta + ai[active] * beta[i]
            new = min(1.0, float(np.min(slack / ai[active])))
            changed = max(changed, new - beta[i])
            beta[i] = max(beta[i], new)
        if changed <= 1e-12:
            break
    return beta


def _contract_budget_lp(Zm: Zonotope, Zs: Zonotope, tol: float) -> np.ndarray:
    """Largest per-generator scales under the generator-budget certificate.

    One LP maximizes the common scale, then one LP per generator and pass
    maximizes each scale with the others held fixed. The certificate is the
    same sufficient containment used by contains_zonotope, so the result is
    the best point it can certify (no bisection gap).
    """
    Gm = Zm.generators
    n, qm = Gm.shape
    q = qm
    S = Zs.generators
    qs = S.shape[1]

    def solve(beta: np.ndarray, free: int | None) -> float | None:
        """Max beta[free] (or the common scale when free is None)."""
        cols = q + qs
        nv = 1 + 2 * qm * cols  # scale, then Gamma+ and Gamma- column-major
        c = np.zeros(nv)
        c[0] = -1.0
        A_eq = np.zeros((n * cols, nv))
        b_eq = np.zeros(n * cols)
        for j in range(cols):
            rows = slice(n * j, n * (j + 1))
            A_eq[rows, 1 + qm * j:1 + qm * (j + 1)] = Gm
            A_eq[rows, 1 + qm * cols + qm * j:1 + qm * cols + qm * (j + 1)] = -Gm
            # Target of column j: a scaled own generator or a Zs generator.
            if j < q:
                if free is None or j == free:
                    A_eq[rows, 0] = -Gm[:, j]
                else:
                    b_eq[rows] = beta[j] * Gm[:, j]
            else:
                b_eq[rows] = S[:, j - q]
        A_ub = np.zeros((qm, nv))
        for j in range(cols):
            A_ub[:, 1 + qm * j:1 + qm * (j + 1)] += np.eye(qm)
            A_ub[:, 1 + qm * cols + qm * j:1 + qm * cols + qm * (j + 1)] += np.eye(qm)
        b_ub = np.ones(qm)
        bounds = [(0.0, 1.0)] + [(0.0, None)] * (nv - 1)
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                      bounds=bounds, method="highs")
        if not res.success:
            return None
        return float(res.x[0])

    common = solve(np.zeros(q), None)
    beta = np.full(q, common if common is not None else 0.0)
    for _ in range(2):
        improved = False
        for i in range(q):
            if 1.0 - beta[i] <= 1e-9:
                continue
            new = solve(beta, i)
            if new is not None and new > beta[i] + 1e-12:
                beta[i] = new
                improved = True
        if not improved:
            break
    return beta
