"""Dense complex linear algebra for small bipartite systems.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Bipartite
operators on C^d (x) C^d use the row index ``i * d + k`` for ``|i>|k>``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

HERMITIAN_TOL = 1e-10
EQUAL_TOL = 1e-12
JACOBI_TOL = 1e-13
MAX_SWEEPS = 60


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    def __init__(self, sweeps, residual):
        super().__init__(f"Jacobi did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")
        self.sweeps = sweeps
        self.residual = residual


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a square complex128 array, raising on bad shapes."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def entrywise_conjugate(a) -> np.ndarray:
    return np.conj(np.asarray(a, dtype=np.complex128))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr(a^dagger b) as an entrywise sum."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def is_hermitian(a, tol: float = EQUAL_TOL) -> bool:
    m = as_matrix(a)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def _split(rho, d: int) -> np.ndarray:
    m = as_matrix(rho)
    if d < 1 or m.shape[0] != d * d:
        raise DimensionError(f"matrix of side {m.shape[0]} is not a {d}x{d} bipartite operator")
    return m.reshape(d, d, d, d)


def partial_trace(rho, d: int, subsystem: str = "A") -> np.ndarray:
    """Reduced operator on ``subsystem`` ('A' or 'B'); the other factor is traced out."""
    t = _split(rho, d)
    if subsystem == "A":
        return np.einsum("ikjk->ij", t)
    if subsystem == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def partial_transpose(rho, d: int) -> np.ndarray:
    """Transpose on the second tensor factor."""
    t = _split(rho, d)
    return t.transpose(0, 3, 2, 1).reshape(d * d, d * d).copy()


@lru_cache(maxsize=None)
def _rounds(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # circle-method tournament: every pair (p, q) appears exactly once per sweep,
    # pairs inside one round are disjoint so their rotations commute
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        if pairs:
            p, q = zip(*pairs)
            rounds.append((np.array(p), np.array(q)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def hermitian_eigenvalues(a, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS,
                          hermitian_tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.

    Each sweep annihilates every off-diagonal pair once, grouped into rounds
    of disjoint pairs. Iteration stops when the off-diagonal Frobenius norm
    drops to ``tol * ||a||_F``.

    Raises
    ------
    NotHermitianError
        If ``max|a - a^dagger| > hermitian_tol``.
    ConvergenceError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    m = as_matrix(a)
    n = m.shape[0]
    if np.max(np.abs(m - m.conj().T), initial=0.0) > hermitian_tol:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    work = 0.5 * (m + m.conj().T)
    target = tol * float(np.linalg.norm(work))
    off = _off_norm(work)
    sweeps = 0
    while off > target:
        if sweeps == max_sweeps:
            raise ConvergenceError(sweeps, off)
        for p, q in _rounds(n):
            beta = work[p, q]
            mag = np.abs(beta)
            active = mag > 0.0
            if not active.any():
                continue
            safe = np.where(active, mag, 1.0)
            phase = np.where(active, np.conj(beta) / safe, 1.0)
            alpha = work[p, p].real
            gamma = work[q, q].real
            tau = (gamma - alpha) / (2.0 * safe)
            sign = np.where(tau >= 0.0, 1.0, -1.0)
            t = np.where(active, sign / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            u = np.eye(n, dtype=np.complex128)
            u[p, p] = c
            u[p, q] = s
            u[q, p] = -s * phase
            u[q, q] = c * phase
            work = u.conj().T @ work @ u
        sweeps += 1
        off = _off_norm(work)
    return np.sort(np.diag(work).real)


def is_psd(a, tol: float = HERMITIAN_TOL) -> bool:
    return bool(hermitian_eigenvalues(a)[0] >= -tol)


def min_eigenvalue(a) -> float:
    return float(hermitian_eigenvalues(a)[0])
