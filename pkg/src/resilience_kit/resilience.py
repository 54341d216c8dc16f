"""Control-deficit set construction and resilience verdicts.

After losing authority over a subset of actuators, the remaining control
capacity (once the worst uncontrolled input is counteracted) is the
Minkowski difference of the controlled and uncontrolled input sets. The
verdicts combine a rank test, a spectral test, and an eigenvector test on
that set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import zonotope as zn
from .errors import CapacityError, DimensionError, PreconditionError, RankError
from .linalg import (
    DEFAULT_TOL,
    Spectrum,
    controllability_rank,
    eigen_spectrum,
)
from .zonotope import EMPTY_SET, Zonotope, linear_map, box_zonotope, support


@dataclass
class LinearSystem:
    """x' = A x + B_bar u_bar with u_bar in the unit box."""

    A: np.ndarray
    B_bar: np.ndarray
    actuator_labels: list[str] = field(default_factory=list)
    state_labels: list[str] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        self.B_bar = np.asarray(self.B_bar, dtype=float)
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise DimensionError("A must be square")
        if self.B_bar.shape[0] != n:
            raise DimensionError("B_bar row count must match A")
        if not self.actuator_labels:
            self.actuator_labels = [f"u{i+1}" for i in range(self.B_bar.shape[1])]
        if len(self.actuator_labels) != self.B_bar.shape[1]:
            raise DimensionError("actuator label count mismatch")
        if self.state_labels and len(self.state_labels) != n:
            raise DimensionError("state label count mismatch")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def input_zonotope(self) -> Zonotope:
        """B_bar applied to the unit input box."""
        return Zonotope(np.zeros(self.n), self.B_bar)


@dataclass
class ControlSplit:
    """Partition of B_bar columns into controlled B and uncontrolled C."""

    uncontrolled_indices: tuple[int, ...]
    B: np.ndarray
    C: np.ndarray
    controlled_labels: list[str] = field(default_factory=list)
    uncontrolled_labels: list[str] = field(default_factory=list)


def split_system(sys: LinearSystem, lost) -> ControlSplit:
    """Column partition of B_bar; order preserved within each part."""
    lost = tuple(sorted(set(int(i) for i in lost)))
    total = sys.B_bar.shape[1]
    if not lost:
        raise ValueError("lost set must be nonempty")
    if any(i < 0 or i >= total for i in lost):
        raise ValueError(f"lost indices out of range 0..{total-1}: {lost}")
    if len(lost) >= total:
        raise ValueError("cannot lose every actuator")
    keep = [i for i in range(total) if i not in lost]
    return ControlSplit(
        uncontrolled_indices=lost,
        B=sys.B_bar[:, keep],
        C=sys.B_bar[:, list(lost)],
        controlled_labels=[sys.actuator_labels[i] for i in keep],
        uncontrolled_labels=[sys.actuator_labels[i] for i in lost],
    )


@dataclass
class ZSet:
    """Inner zonotope approximation of BU (-) (-CW) plus span metadata.

    affine_dim is None for the empty set (the -infinity convention).
    outer, when available, is the exact halfspace representation of the
    true difference: the facets of BU with each offset reduced by the
    support of CW along the facet normal (erosion by a polytope equals the
    intersection of the translates by its vertices). It is None when BU is
    not full-dimensional or the true set has empty interior.
    """

    inner: object  # Zonotope or EMPTY_SET
    affine_dim: int | None
    basis: np.ndarray  # n x r, orthonormal columns spanning the set
    exact: bool
    outer: zn.HPolytope | None = None

    @property
    def is_empty(self) -> bool:
        return self.inner is EMPTY_SET


def compute_z_set(split: ControlSplit, tol: float = 1e-9) -> ZSet:
    """Control capacity left after counteracting the worst uncontrolled input.

    Empty exactly when CW is not contained in BU; otherwise an inner
    zonotope approximation of the Minkowski difference. Both operand sets
    are symmetric, so -CW = CW.
    """
    n = split.B.shape[0]
    BU = Zonotope(np.zeros(n), split.B)
    CW = Zonotope(np.zeros(n), split.C)
    if not zn.contains_zonotope(BU, CW, mode="auto", tol=tol):
        return ZSet(inner=EMPTY_SET, affine_dim=None, basis=np.zeros((n, 0)), exact=True)
    exact = zn._is_axis_aligned(BU) and zn._is_axis_aligned(CW)
    inner = zn.inner_minkowski_difference(BU, CW, tol=tol)
    if inner is EMPTY_SET:
        return ZSet(inner=EMPTY_SET, affine_dim=None, basis=np.zeros((n, 0)), exact=exact)
    outer = _outer_difference(BU, CW)
    if inner.num_generators == 0:
        return ZSet(inner=inner, affine_dim=0, basis=np.zeros((n, 0)), exact=exact,
                    outer=outer)
    U, s, _ = np.linalg.svd(inner.generators, full_matrices=False)
    r = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    return ZSet(inner=inner, affine_dim=r, basis=U[:, :r], exact=exact, outer=outer)


def _outer_difference(BU: Zonotope, CW: Zonotope) -> zn.HPolytope | None:
    """Exact halfspace form of BU (-) CW for full-dimensional BU.

    Eroding a convex set by a polytope is the intersection of its translates
    by the polytope's vertices, so each facet of BU keeps its normal and its
    offset shrinks by the support of CW along that normal. None when BU is
    flat (no facet form) or the difference has empty interior.
    """
    try:
        H = zn.facets(BU)
    except (RankError, CapacityError):
        return None
    offsets = np.array([o - support(CW, d) for d, o in zip(H.normals, H.offsets)])
    if np.min(offsets) <= 0.0:
        return None
    return zn.HPolytope(normals=np.asarray(H.normals, dtype=float), offsets=offsets)


def eigenvector_condition(spec: Spectrum, zset: ZSet, tol: float = DEFAULT_TOL) -> bool:
    """No real eigenvector of A^T annihilates the control-deficit set.

    By symmetry of the set, "v'z <= 0 for all z" collapses to "v'z = 0 for
    all z", i.e. v orthogonal to its span; the condition holds iff the
    support along every stored real eigenvector is positive.
    """
    if zset.is_empty:
        raise PreconditionError("eigenvector condition needs a nonempty set")
    for _, v in spec.real_eigenvectors:
        if support(zset.inner, v) <= tol:
            return False
    return True


@dataclass
class ResilienceVerdict:
    z_empty: bool
    z_dim: int | None
    rank_condition: bool
    spectrum_condition: str  # strictly-negative-ok | zero-ok | violated
    eigenvector_condition: bool
    resiliently_stabilizable: bool
    resilient: bool
    dim_equals_rankB: bool
    diagnostics: dict = field(default_factory=dict)


def _spectrum_class(eigvals: np.ndarray, tol: float) -> str:
    re = eigvals.real
    if np.all(np.abs(re) <= tol):
        return "zero-ok"
    if np.all(re <= tol):
        return "strictly-negative-ok"
    return "violated"


def _verdict(sys: LinearSystem, split: ControlSplit, tol: float) -> ResilienceVerdict:
    spec = eigen_spectrum(sys.A)
    zset = compute_z_set(split, tol=tol)
    n = sys.n
    rankB = int(np.linalg.matrix_rank(split.B, tol=None)) if split.B.size else 0
    diag: dict = {
        "eigenvalues": [complex(l) for l in spec.eigenvalues],
        "spectrum_tol": tol,
        "z_exact": zset.exact,
        "rank_B": rankB,
    }
    if zset.is_empty:
        diag["reason"] = "uncontrolled input set not contained in controlled input set"
        return ResilienceVerdict(
            z_empty=True, z_dim=None, rank_condition=False,
            spectrum_condition=_spectrum_class(spec.eigenvalues, tol),
            eigenvector_condition=False,
            resiliently_stabilizable=False, resilient=False,
            dim_equals_rankB=False, diagnostics=diag,
        )
    rank = controllability_rank(sys.A, zset.basis, tol=tol) if zset.affine_dim else 0
    diag["controllability_rank"] = rank
    spectrum = _spectrum_class(spec.eigenvalues, tol)
    eig_ok = eigenvector_condition(spec, zset, tol=tol)
    dim_eq = zset.affine_dim == rankB
    if not zset.exact:
        diag["conservative_note"] = (
            "verdict computed on an inner approximation; a negative rank or "
            "eigenvector sub-result may be conservative"
        )
    stab = (rank == n) and spectrum in ("strictly-negative-ok", "zero-ok") and eig_ok
    resil = (rank == n) and spectrum == "zero-ok" and eig_ok
    if dim_eq:
        diag["corollary"] = {
            "stabilizable_equiv_nominal": check_nominal(sys, "stabilizable", tol=tol),
            "controllable_equiv_nominal": check_nominal(sys, "controllable", tol=tol),
        }
    return ResilienceVerdict(
        z_empty=False, z_dim=zset.affine_dim, rank_condition=(rank == n),
        spectrum_condition=spectrum, eigenvector_condition=eig_ok,
        resiliently_stabilizable=stab, resilient=resil,
        dim_equals_rankB=dim_eq, diagnostics=diag,
    )


def check_resilient_stabilizability(sys: LinearSystem, split: ControlSplit,
                                    tol: float = DEFAULT_TOL) -> ResilienceVerdict:
    """Origin reachable from anywhere despite worst-case uncontrolled inputs."""
    return _verdict(sys, split, tol)


def check_resilience(sys: LinearSystem, split: ControlSplit,
                     tol: float = DEFAULT_TOL) -> ResilienceVerdict:
    """Every target reachable from anywhere despite worst-case uncontrolled inputs."""
    return _verdict(sys, split, tol)


def check_nominal(sys: LinearSystem, mode: str, tol: float = DEFAULT_TOL) -> bool:
    """Bounded-input stabilizability/controllability of the intact system.

    Rank of the controllability matrix, spectral condition (Re <= 0 for
    stabilizable, Re = 0 for controllable), and positive support of the
    full input set along every real eigenvector of A^T.
    """
    if mode not in ("stabilizable", "controllable"):
        raise ValueError(f"unknown mode {mode!r}")
    spec = eigen_spectrum(sys.A)
    rank_ok = controllability_rank(sys.A, sys.B_bar, tol=tol) == sys.n
    sclass = _spectrum_class(spec.eigenvalues, tol)
    if mode == "stabilizable":
        spec_ok = sclass in ("strictly-negative-ok", "zero-ok")
    else:
        spec_ok = sclass == "zero-ok"
    BUbar = sys.input_zonotope()
    eig_ok = all(support(BUbar, v) > tol for _, v in spec.real_eigenvectors)
    return bool(rank_ok and spec_ok and eig_ok)
