"""Bipartite benchmark states on C^d (x) C^d."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix, hermitian_eigenvalues, partial_trace

STATE_PSD_TOL = 1e-10
STATE_EQ_TOL = 1e-12


class StateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix with its cached reduced states.

    Build through :func:`make_state`, which validates; the raw constructor
    trusts its inputs.
    """

    d: int
    rho: np.ndarray
    rhoA: np.ndarray
    rhoB: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("rho", "rhoA", "rhoB"):
            a = np.array(getattr(self, name), dtype=np.complex128)
            a.flags.writeable = False
            object.__setattr__(self, name, a)

    @property
    def product_of_marginals(self) -> np.ndarray:
        return np.kron(self.rhoA, self.rhoB)


def make_state(rho, d: int, provenance: dict | None = None, validate: bool = True) -> BipartiteState:
    """Wrap ``rho`` as a :class:`BipartiteState`, rejecting non-states.

    Nothing is renormalized or symmetrized: a matrix that is not Hermitian
    within 1e-12, not unit trace within 1e-12, or has an eigenvalue below
    -1e-10 raises :class:`StateError`.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != d * d:
        raise StateError(f"state of side {rho.shape[0]} does not match d={d}")
    if validate:
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > STATE_EQ_TOL:
            raise StateError(f"not Hermitian (deviation {herm:.2e})")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > STATE_EQ_TOL:
            raise StateError(f"trace is {tr!r}, expected 1")
        lam = hermitian_eigenvalues(rho)[0]
        if lam < -STATE_PSD_TOL:
            raise StateError(f"not positive semidefinite (min eigenvalue {lam:.2e})")
    return BipartiteState(d, rho, partial_trace(rho, d, "A"), partial_trace(rho, d, "B"), dict(provenance or {}))


def weyl_operator(d: int, s: int, t: int) -> np.ndarray:
    """U_st = sum_j w^(s j) |j><j + t mod d|, w = exp(2 pi i / d)."""
    if not (0 <= s < d and 0 <= t < d):
        raise ValueError(f"Weyl indices must lie in [0, {d}), got ({s}, {t})")
    j = np.arange(d)
    u = np.zeros((d, d), dtype=np.complex128)
    u[j, (j + t) % d] = np.exp(2j * np.pi * ((s * j) % d) / d)
    return u


def maximally_entangled_vector(d: int) -> np.ndarray:
    v = np.zeros(d * d, dtype=np.complex128)
    v[np.arange(d) * (d + 1)] = 1 / math.sqrt(d)
    return v


def maximally_entangled(d: int) -> BipartiteState:
    if d < 2:
        raise StateError(f"need d >= 2, got {d}")
    v = maximally_entangled_vector(d)
    return make_state(np.outer(v, v.conj()), d, {"constructor": "maximally_entangled", "d": d})


def swap_operator(d: int) -> np.ndarray:
    eta = np.zeros((d * d, d * d), dtype=np.complex128)
    i, j = np.divmod(np.arange(d * d), d)
    eta[i * d + j, j * d + i] = 1.0
    return eta


@dataclass(frozen=True)
class BellDiagonalSpec:
    d: int
    coefficients: tuple

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.shape != (self.d, self.d):
            raise StateError(f"need a {self.d}x{self.d} coefficient table, got shape {c.shape}")
        if (c < 0).any():
            raise StateError("Bell-diagonal coefficients must be nonnegative")
        if abs(c.sum() - 1.0) > 1e-14:
            raise StateError(f"coefficients sum to {c.sum()!r}, expected 1")
        object.__setattr__(self, "coefficients", tuple(map(tuple, c.tolist())))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coefficients)

    @property
    def argmax(self) -> tuple[int, int]:
        c = self.array
        return tuple(int(x) for x in np.unravel_index(np.argmax(c), c.shape))

    @property
    def argmin(self) -> tuple[int, int]:
        c = self.array
        return tuple(int(x) for x in np.unravel_index(np.argmin(c), c.shape))


def bell_vector(d: int, s: int, t: int) -> np.ndarray:
    return np.kron(weyl_operator(d, s, t), np.eye(d)) @ maximally_entangled_vector(d)


def bell_diagonal(spec: BellDiagonalSpec) -> BipartiteState:
    d = spec.d
    c = spec.array
    rho = np.zeros((d * d, d * d), dtype=np.complex128)
    for s in range(d):
        for t in range(d):
            if c[s, t]:
                v = bell_vector(d, s, t)
                rho += c[s, t] * np.outer(v, v.conj())
    return make_state(rho, d, {"constructor": "bell_diagonal", "d": d, "coefficients": c.tolist()})


def werner(d: int, g: float) -> BipartiteState:
    """Werner state with Tr(rho * swap) = g; entangled iff g < 0."""
    if not -1.0 <= g <= 1.0:
        raise StateError(f"Werner parameter must lie in [-1, 1], got {g}")
    rho = ((d - g) * np.eye(d * d) + (d * g - 1) * swap_operator(d)) / (d ** 3 - d)
    return make_state(rho, d, {"constructor": "werner", "d": d, "g": g})


def horodecki_3x3(a: float) -> BipartiteState:
    """Horodecki's PPT entangled two-qutrit state, 0 < a < 1."""
    if not 0.0 < a < 1.0:
        raise StateError(f"Horodecki parameter must lie in (0, 1), got {a}")
    m = a * np.eye(9)
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            m[i, j] = a
    m[6, 6] = m[8, 8] = (1 + a) / 2
    m[6, 8] = m[8, 6] = math.sqrt(1 - a * a) / 2
    return make_state(m / (8 * a + 1), 3, {"constructor": "horodecki_3x3", "a": a})


def mix(p: float, rho1: BipartiteState, rho2: BipartiteState) -> BipartiteState:
    """p * rho1 + (1 - p) * rho2."""
    if not 0.0 <= p <= 1.0:
        raise StateError(f"mixing weight must lie in [0, 1], got {p}")
    if rho1.d != rho2.d:
        raise StateError(f"dimension mismatch: {rho1.d} vs {rho2.d}")
    if p == 1.0:
        return rho1
    if p == 0.0:
        return rho2
    prov = {"constructor": "mix", "p": p, "rho1": rho1.provenance, "rho2": rho2.provenance}
    return make_state(p * rho1.rho + (1 - p) * rho2.rho, rho1.d, prov)


def _random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_state(d: int, kind: str = "full-rank", seed=None) -> BipartiteState:
    """Seeded random state (numpy PCG64 through ``default_rng``).

    kind
        ``"separable"``: Dirichlet(1,...,1) mixture of d^2 random pure product
        states. ``"full-rank"``: G G^dagger / Tr for complex Gaussian G.
        ``"pure"``: Haar-random vector.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = d * d
    if kind == "separable":
        w = rng.dirichlet(np.ones(n))
        rho = np.zeros((n, n), dtype=np.complex128)
        for wi in w:
            v = np.kron(_random_unit(rng, d), _random_unit(rng, d))
            rho += wi * np.outer(v, v.conj())
    elif kind == "full-rank":
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rho = g @ g.conj().T
    elif kind == "pure":
        v = _random_unit(rng, n)
        rho = np.outer(v, v.conj())
    else:
        raise ValueError(f"unknown random state kind {kind!r}")
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    prov = {"constructor": "random_state", "d": d, "kind": kind}
    if isinstance(seed, (int, np.integer)):
        prov["seed"] = int(seed)
    return make_state(rho, d, prov)


def random_pure_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector in C^d."""
    return _random_unit(rng, d)
