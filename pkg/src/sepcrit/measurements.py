"""Measurement families on C^d: MUBs, MUMs and GSIC-POVMs.

MUBs are built for prime ``d`` only. MUMs and GSIC-POVMs come from the
generalized Gell-Mann operators, scaled so that the defining trace relations
hold exactly; positivity is not automatic and is certified element by
element, which caps the reachable efficiency ``kappa`` and purity ``alpha``
(see :func:`max_feasible_kappa` and :func:`max_feasible_alpha`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import HERMITIAN_TOL, hermitian_eigenvalues, is_psd
from .states import weyl_operator

AXIOM_TOL = 1e-10


class ParameterError(ValueError):
    pass


class NotPrimeError(ParameterError):
    pass


class PositivityInfeasible(ValueError):
    """Raised when a constructed POVM element is not positive semidefinite."""

    def __init__(self, family, index, min_eigenvalue):
        super().__init__(f"{family} element {index} has min eigenvalue {min_eigenvalue:.3e}")
        self.family = family
        self.index = index
        self.min_eigenvalue = min_eigenvalue


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class MubSet:
    """``m`` mutually unbiased bases; ``bases[k, i]`` is the vector |i_k>."""

    d: int
    bases: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bases", _frozen(self.bases))

    @property
    def m(self) -> int:
        return self.bases.shape[0]

    @property
    def projectors(self) -> np.ndarray:
        """All rank-one projectors, shape ``(m*d, d, d)``, basis-major."""
        v = self.bases.reshape(-1, self.d)
        return np.einsum("ei,ej->eij", v, v.conj())

    @property
    def bound(self) -> float:
        return 1.0 + (self.m - 1) / self.d


@dataclass(frozen=True, eq=False)
class MumSet:
    """Complete set of ``d+1`` MUMs; ``elements[b, n]`` is P_n^(b)."""

    d: int
    kappa: float
    elements: np.ndarray
    tag: str = "gell-mann"

    def __post_init__(self):
        object.__setattr__(self, "elements", _frozen(self.elements))
        if self.elements.shape != (self.d + 1, self.d, self.d, self.d):
            raise ParameterError(f"MUM elements must have shape (d+1, d, d, d), got {self.elements.shape}")

    @property
    def flat(self) -> np.ndarray:
        return self.elements.reshape(-1, self.d, self.d)

    @property
    def param(self) -> dict:
        return {"kappa": self.kappa}

    @property
    def bound(self) -> float:
        return 1.0 + self.kappa

    def with_elements(self, elements, tag=None) -> "MumSet":
        return MumSet(self.d, self.kappa, elements, tag or self.tag)


@dataclass(frozen=True, eq=False)
class GsicSet:
    """GSIC-POVM with ``d**2`` elements of purity ``alpha``."""

    d: int
    alpha: float
    elements: np.ndarray
    tag: str = "gell-mann"

    def __post_init__(self):
        object.__setattr__(self, "elements", _frozen(self.elements))
        if self.elements.shape != (self.d ** 2, self.d, self.d):
            raise ParameterError(f"GSIC elements must have shape (d^2, d, d), got {self.elements.shape}")

    @property
    def flat(self) -> np.ndarray:
        return self.elements

    @property
    def param(self) -> dict:
        return {"alpha": self.alpha}

    @property
    def bound(self) -> float:
        d = self.d
        return (self.alpha * d * d + 1) / (d * (d + 1))

    def with_elements(self, elements, tag=None) -> "GsicSet":
        return GsicSet(self.d, self.alpha, elements, tag or self.tag)


@dataclass
class AxiomReport:
    family: str
    residuals: dict = field(default_factory=dict)
    tol: float = AXIOM_TOL

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return all(r <= self.tol for r in self.residuals.values())

    def __str__(self):
        rows = ", ".join(f"{k}={v:.2e}" for k, v in self.residuals.items())
        return f"{self.family}: {'pass' if self.passed else 'FAIL'} ({rows})"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


def gell_mann_basis(d: int) -> np.ndarray:
    """Orthonormal traceless Hermitian basis, shape ``(d*d - 1, d, d)``.

    Order: symmetric off-diagonal (j < k, lexicographic), antisymmetric
    off-diagonal (same order), then diagonal l = 1..d-1. Normalized so that
    Tr(F_i F_j) = delta_ij; for d = 2 this is X, Y, Z over sqrt(2).
    """
    if d < 2:
        raise ParameterError(f"Gell-Mann basis needs d >= 2, got {d}")
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    out = np.zeros((d * d - 1, d, d), dtype=np.complex128)
    r = 1 / math.sqrt(2)
    for idx, (j, k) in enumerate(pairs):
        out[idx, j, k] = out[idx, k, j] = r
        off = idx + len(pairs)
        out[off, j, k] = -1j * r
        out[off, k, j] = 1j * r
    base = 2 * len(pairs)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out[base + l - 1] = np.diag(diag / math.sqrt(l * (l + 1)))
    return out


def build_mub_set(d: int, m: int | None = None) -> MubSet:
    """The first ``m`` bases of the standard complete MUB set for prime ``d``.

    Basis 0 is computational. For d = 2 the others are the X and Y
    eigenbases; for odd d, basis k+1 has vectors
    ``(1/sqrt d) sum_l w^(k l^2 + j l) |l>`` with ``w = exp(2 pi i/d)``.
    """
    if not is_prime(d):
        raise NotPrimeError(f"MUB construction requires prime d, got {d}")
    m = d + 1 if m is None else m
    if not 2 <= m <= d + 1:
        raise ParameterError(f"need 2 <= m <= d+1, got m={m} for d={d}")
    bases = [np.eye(d, dtype=np.complex128)]
    if d == 2:
        r = 1 / math.sqrt(2)
        bases.append(np.array([[r, r], [r, -r]], dtype=np.complex128))
        bases.append(np.array([[r, 1j * r], [r, -1j * r]], dtype=np.complex128))
    else:
        w = np.exp(2j * np.pi / d)
        l = np.arange(d)
        for k in range(d):
            bases.append(np.array([w ** ((k * l * l + j * l) % d) for j in range(d)]) / math.sqrt(d))
    return MubSet(d, np.array(bases[:m]))


def mum_from_mub(mubs: MubSet) -> MumSet:
    """kappa = 1 MUMs: the rank-one projectors of a complete MUB set."""
    if mubs.m != mubs.d + 1:
        raise ParameterError(f"need a complete MUB set (m = d+1 = {mubs.d + 1}), got m={mubs.m}")
    d = mubs.d
    return MumSet(d, 1.0, mubs.projectors.reshape(d + 1, d, d, d), tag="mub")


def _mum_blocks(d: int) -> np.ndarray:
    # F_n^(b) = F^(b) - (d + sqrt d) F_{n,b} for n < d, F_d^(b) = (1 + sqrt d) F^(b)
    gm = gell_mann_basis(d).reshape(d + 1, d - 1, d, d)
    total = gm.sum(axis=1)
    rd = math.sqrt(d)
    blocks = np.empty((d + 1, d, d, d), dtype=np.complex128)
    blocks[:, : d - 1] = total[:, None] - (d + rd) * gm
    blocks[:, d - 1] = (1 + rd) * total
    return blocks


def _gsic_blocks(d: int) -> np.ndarray:
    # G_m = F - d(d+1) F_m for m < d^2, G_{d^2} = (d+1) F
    gm = gell_mann_basis(d)
    total = gm.sum(axis=0)
    blocks = np.empty((d * d, d, d), dtype=np.complex128)
    blocks[:-1] = total - d * (d + 1) * gm
    blocks[-1] = (d + 1) * total
    return blocks


def _common_norm(blocks: np.ndarray) -> float:
    norms = np.einsum("...ij,...ji->...", blocks, blocks).real.ravel()
    if np.ptp(norms) > 1e-9 * norms.max():
        raise ArithmeticError(f"block norms are not uniform: {norms.min()}..{norms.max()}")
    return float(norms.mean())


def _certify(name, elements, index_of):
    for i, el in enumerate(elements.reshape(-1, *elements.shape[-2:])):
        if not is_psd(el, HERMITIAN_TOL):
            raise PositivityInfeasible(name, index_of(i), float(hermitian_eigenvalues(el)[0]))


def build_mum_set(d: int, kappa: float) -> MumSet:
    """Complete MUM set with efficiency ``kappa`` from Gell-Mann operators.

    ``P_n^(b) = I/d + t F_n^(b)`` with ``t = sqrt((kappa - 1/d) / Tr[F_n^(b)^2])``.

    Raises
    ------
    ParameterError
        If kappa is outside (1/d, 1].
    PositivityInfeasible
        If kappa exceeds what this construction reaches in dimension d; the
        error carries the offending ``(b, n)``.
    """
    if d < 2:
        raise ParameterError(f"need d >= 2, got {d}")
    if not 1.0 / d < kappa <= 1.0:
        raise ParameterError(f"kappa must lie in (1/d, 1] = ({1 / d:.6g}, 1], got {kappa}")
    blocks = _mum_blocks(d)
    t = math.sqrt((kappa - 1.0 / d) / _common_norm(blocks))
    elements = np.eye(d) / d + t * blocks
    _certify("MUM", elements, lambda i: divmod(i, d))
    return MumSet(d, float(kappa), elements)


def build_gsic_set(d: int, alpha: float) -> GsicSet:
    """GSIC-POVM with purity ``alpha`` from Gell-Mann operators.

    ``Q_m = I/d^2 + t G_m`` with ``t = sqrt((alpha - 1/d^3) / Tr[G_m^2])``.
    Raises like :func:`build_mum_set`; the error index is ``m``.
    """
    if d < 2:
        raise ParameterError(f"need d >= 2, got {d}")
    if not 1.0 / d ** 3 < alpha <= 1.0 / d ** 2:
        raise ParameterError(f"alpha must lie in (1/d^3, 1/d^2] for d={d}, got {alpha}")
    blocks = _gsic_blocks(d)
    t = math.sqrt((alpha - 1.0 / d ** 3) / _common_norm(blocks))
    elements = np.eye(d) / d ** 2 + t * blocks
    _certify("GSIC", elements, lambda i: i)
    return GsicSet(d, float(alpha), elements)


# Weyl-Heisenberg covariant SIC fiducials; only d = 2, 3 are provided
_SIC_FIDUCIALS = {
    2: lambda: np.array([math.sqrt((1 + 1 / math.sqrt(3)) / 2),
                         np.exp(1j * np.pi / 4) * math.sqrt((1 - 1 / math.sqrt(3)) / 2)]),
    3: lambda: np.array([0.0, 1.0, -1.0]) / math.sqrt(2),
}


def weyl_heisenberg_sic(d: int) -> GsicSet:
    """SIC-POVM (alpha = 1/d^2) as the Weyl orbit of a known fiducial, d in {2, 3}."""
    if d not in _SIC_FIDUCIALS:
        raise ParameterError(f"no SIC fiducial stored for d={d}")
    psi = _SIC_FIDUCIALS[d]().astype(np.complex128)
    els = []
    for s in range(d):
        for t in range(d):
            v = weyl_operator(d, s, t) @ psi
            els.append(np.outer(v, v.conj()) / d)
    return GsicSet(d, 1.0 / d ** 2, np.array(els), tag="sic")


def max_feasible_kappa(d: int) -> float:
    """Largest kappa for which :func:`build_mum_set` keeps every element PSD.

    Element eigenvalues are ``1/d + t * eig(F_n^(b))``, so the limit follows
    from the most negative block eigenvalue.
    """
    blocks = _mum_blocks(d)
    lam = min(hermitian_eigenvalues(b)[0] for b in blocks.reshape(-1, d, d))
    t_max = (1.0 / d) / -lam
    return min(1.0, 1.0 / d + t_max ** 2 * _common_norm(blocks))


def max_feasible_alpha(d: int) -> float:
    """Largest alpha for which :func:`build_gsic_set` keeps every element PSD."""
    blocks = _gsic_blocks(d)
    lam = min(hermitian_eigenvalues(b)[0] for b in blocks)
    t_max = (1.0 / d ** 2) / -lam
    return min(1.0 / d ** 2, 1.0 / d ** 3 + t_max ** 2 * _common_norm(blocks))


def feasible_grid(kind: str, d: int, count: int = 5) -> list[float]:
    """``count`` evenly spaced feasible parameters, ending at the maximum."""
    if kind == "mum":
        lo, hi = 1.0 / d, max_feasible_kappa(d)
    elif kind == "gsic":
        lo, hi = 1.0 / d ** 3, max_feasible_alpha(d)
    else:
        raise ParameterError(f"unknown family kind {kind!r}")
    # stay a hair inside the edge so roundoff in t never flips positivity
    hi = lo + (hi - lo) * (1 - 1e-9)
    return [lo + (hi - lo) * (i + 1) / count for i in range(count)]


def _gram(ops: np.ndarray) -> np.ndarray:
    return np.einsum("aij,bji->ab", ops, ops)


def _positivity(ops) -> float:
    return max(0.0, -min(hermitian_eigenvalues(o)[0] for o in ops))


def _hermiticity(ops) -> float:
    return float(np.max(np.abs(ops - ops.conj().transpose(0, 2, 1))))


def axiom_residuals(family, tol: float = AXIOM_TOL) -> AxiomReport:
    """Maximum absolute deviation from each defining relation of ``family``."""
    d = family.d
    eye = np.eye(d)
    if isinstance(family, MubSet):
        g = np.einsum("kia,lja->klij", family.bases.conj(), family.bases)
        same = np.arange(family.m)
        ortho = np.abs(g[same, same] - eye).max()
        off = ~np.eye(family.m, dtype=bool)
        unbiased = np.abs(np.abs(g[off]) ** 2 - 1.0 / d).max() if family.m > 1 else 0.0
        count = max(0.0, family.m - (d + 1))
        return AxiomReport(f"MUB(d={d}, m={family.m})",
                           {"orthonormal": float(ortho), "unbiased": float(unbiased), "count": float(count)}, tol)

    if isinstance(family, MumSet):
        ops = family.flat
        kappa = family.kappa
        b_idx = np.repeat(np.arange(d + 1), d)
        n_idx = np.tile(np.arange(d), d + 1)
        same_b = b_idx[:, None] == b_idx[None, :]
        same_n = n_idx[:, None] == n_idx[None, :]
        expected = np.where(same_b, np.where(same_n, kappa, (1 - kappa) / (d - 1)), 1.0 / d)
        res = {
            "hermitian": _hermiticity(ops),
            "positive": _positivity(ops),
            "completeness": float(np.abs(family.elements.sum(axis=1) - eye).max()),
            "trace": float(np.abs(np.einsum("eii->e", ops) - 1.0).max()),
            "overlap": float(np.abs(_gram(ops) - expected).max()),
        }
        return AxiomReport(f"MUM(d={d}, kappa={kappa:.6g})", res, tol)

    if isinstance(family, GsicSet):
        ops = family.elements
        alpha = family.alpha
        gram = _gram(ops)
        diag = np.eye(d * d, dtype=bool)
        cross = (1 - d * alpha) / (d * (d * d - 1))
        res = {
            "hermitian": _hermiticity(ops),
            "positive": _positivity(ops),
            "completeness": float(np.abs(ops.sum(axis=0) - eye).max()),
            "trace": float(np.abs(np.einsum("eii->e", ops) - 1.0 / d).max()),
            "purity": float(np.abs(gram[diag] - alpha).max()),
            "overlap": float(np.abs(gram[~diag] - cross).max()),
        }
        return AxiomReport(f"GSIC(d={d}, alpha={alpha:.6g})", res, tol)

    raise TypeError(f"not a measurement family: {type(family).__name__}")
