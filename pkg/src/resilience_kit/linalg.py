"""Dense small-matrix numerics: spectra, exponentials, controllability, Lyapunov.

All routines target desk-scale systems (n <= 12) and favor robustness over
asymptotic speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionError, NumericalError, PreconditionError

# Default tolerance for classifying Re(lambda) and for numerical ranks.
DEFAULT_TOL = 1e-9

# Eigenvalues with |Im| below this are treated as real when extracting
# real eigenvectors of the transpose.
REAL_EIG_TOL = 1e-9


@dataclass
class Spectrum:
    """Eigenvalues of A together with real unit eigenvectors of A^T.

    Only eigenvectors attached to (numerically) real eigenvalues are kept;
    complex eigenvectors play no role in the stabilizability conditions.
    """

    eigenvalues: np.ndarray
    real_eigenvectors: list[tuple[float, np.ndarray]] = field(default_factory=list)


def _require_square(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix has non-finite entries")
    return A


def eigen_spectrum(A: np.ndarray) -> Spectrum:
    """Full spectrum of A plus real unit eigenvectors of A^T."""
    A = _require_square(A)
    try:
        eigvals = np.linalg.eigvals(A)
        wt, vt = np.linalg.eig(A.T)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalError(f"eigen iteration failed: {exc}") from exc

    real_vecs: list[tuple[float, np.ndarray]] = []
    for lam, vec in zip(wt, vt.T):
        if abs(lam.imag) > REAL_EIG_TOL:
            continue
        # Rotate the phase so the eigenvector is real, then normalize.
        k = int(np.argmax(np.abs(vec)))
        v = (vec * np.exp(-1j * np.angle(vec[k]))).real
        nrm = np.linalg.norm(v)
        if nrm == 0:
            continue
        v = v / nrm
        # Guard: discard if rotation left a meaningful imaginary part.
        if np.linalg.norm(A.T @ v - lam.real * v) > 1e-6 * (1 + abs(lam.real)) * np.linalg.norm(A.T, 2):
            continue
        real_vecs.append((float(lam.real), v))
    return Spectrum(eigenvalues=eigvals, real_eigenvectors=real_vecs)


def is_hurwitz(A: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True iff every eigenvalue of A has real part < -tol."""
    spec = eigen_spectrum(A)
    return bool(np.all(spec.eigenvalues.real < -tol))


def matrix_exponential(A: np.ndarray, t: float = 1.0) -> np.ndarray:
    """e^{A t} by scaling-and-squaring with Pade approximants (scipy.linalg.expm)."""
    A = _require_square(A)
    if not np.isfinite(t):
        raise NumericalError("time t must be finite")
    E = scipy.linalg.expm(A * t)
    if not np.all(np.isfinite(E)):
        raise NumericalError(f"overflow in matrix exponential, ||At|| = {np.linalg.norm(A * t):g}")
    return E


def controllability_matrix(A: np.ndarray, M: np.ndarray) -> np.ndarray:
    """[M, AM, ..., A^{n-1}M]."""
    A = _require_square(A)
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M[:, None]
    n = A.shape[0]
    if M.shape[0] != n:
        raise DimensionError(f"row mismatch: A is {n}x{n}, M has {M.shape[0]} rows")
    blocks = [M]
    for _ in range(n - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def controllability_rank(A: np.ndarray, M: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    """Numerical rank of the controllability matrix of (A, M).

    An empty M (zero columns) encodes the empty-matrix convention and
    returns rank 0; callers map this to the -infinity dimension marker.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M[:, None]
    if M.shape[-1] == 0:
        _require_square(A)
        return 0
    K = controllability_matrix(A, M)
    sv = np.linalg.svd(K, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def _check_spd(Q: np.ndarray, name: str, tol: float = 1e-10) -> np.ndarray:
    Q = _require_square(Q)
    if np.linalg.norm(Q - Q.T) > tol * max(1.0, np.linalg.norm(Q)):
        raise PreconditionError(f"{name} is not symmetric")
    Qs = 0.5 * (Q + Q.T)
    eigs = np.linalg.eigvalsh(Qs)
    if eigs[0] <= tol * max(1.0, eigs[-1]):
        raise PreconditionError(f"{name} is not positive definite (min eig {eigs[0]:g})")
    return Qs


def solve_lyapunov(A: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Solve A^T P + P A = -Q for P > 0 via the Kronecker-vectorized system.

    Requires A Hurwitz and Q symmetric positive definite. The n^2 x n^2
    dense solve is fine at desk scale and keeps the code obvious.
    """
    A = _require_square(A)
    Q = _check_spd(Q, "Q")
    if A.shape != Q.shape:
        raise DimensionError("A and Q must have the same shape")
    if not is_hurwitz(A, tol=0.0):
        raise PreconditionError("A is not Hurwitz; the Lyapunov equation has no PD solution")
    n = A.shape[0]
    I = np.eye(n)
    # vec(A^T P) + vec(P A) = (I (x) A^T + A^T (x) I) vec(P)
    K = np.kron(I, A.T) + np.kron(A.T, I)
    vecP = np.linalg.solve(K, -Q.reshape(n * n, order="F"))
    P = vecP.reshape((n, n), order="F")
    P = 0.5 * (P + P.T)
    resid = np.linalg.norm(A.T @ P + P @ A + Q)
    if resid > 1e-8 * np.linalg.norm(Q):
        raise NumericalError(f"Lyapunov residual too large: {resid:g}")
    return P


def p_norm(P: np.ndarray, x: np.ndarray) -> float:
    """Weighted norm sqrt(x^T P x) for P symmetric positive definite."""
    P = _check_spd(P, "P")
    x = np.asarray(x, dtype=float).ravel()
    if x.size != P.shape[0]:
        raise DimensionError("vector length does not match P")
    return float(np.sqrt(max(0.0, x @ P @ x)))
