"""Separability criteria built on local measurement statistics.

Each evaluator returns a :class:`CriterionResult`; ``Entangled`` means the
separability bound is violated by more than ``VERDICT_TOL``, anything else is
``Inconclusive``. All six are necessary conditions for separability.

==========  ==================================================================
tag         left-hand side / bound
==========  ==================================================================
MUB-M       sum_k,i <i_k i_k|rho|i_k i_k>  <=  1 + (m-1)/d
THM1-L      sum |<i_k i_k|rho|i_k i_k> - <i_k|rhoA|i_k><i_k|rhoB|i_k>|
            <= sqrt((1+(m-1)/d - sum pA^2)(1+(m-1)/d - sum pB^2))
MUM-T       sum_b,n Tr(P (x) Q rho)  <=  1 + kappa
THM2-S      sum |Tr(P (x) Q (rho - rhoA (x) rhoB))|  <=  sqrt((1+kappa-...)(...))
GSIC-J      sum_i Tr(P_i (x) Q_i rho)  <=  (alpha d^2 + 1) / (d (d+1))
THM3-R      correlation version of GSIC-J, as THM2-S
==========  ==================================================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import DimensionError
from .measurements import AXIOM_TOL, GsicSet, MubSet, MumSet, ParameterError, axiom_residuals
from .states import BipartiteState, weyl_operator

VERDICT_TOL = 1e-12
RADICAND_TOL = 1e-10
PARAM_TOL = 1e-12

ENTANGLED = "Entangled"
INCONCLUSIVE = "Inconclusive"

MUB_M = "MUB-M"
THM1_L = "THM1-L"
MUM_T = "MUM-T"
THM2_S = "THM2-S"
GSIC_J = "GSIC-J"
THM3_R = "THM3-R"
CRITERIA = (MUB_M, THM1_L, MUM_T, THM2_S, GSIC_J, THM3_R)


class ConsistencyError(ArithmeticError):
    """An analytically impossible value showed up; indicates a bug or a non-state."""


@dataclass
class CriterionResult:
    criterion: str
    lhs: float
    rhs: float
    family_params: dict = field(default_factory=dict)
    pairing: str = "identity"

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def verdict(self) -> str:
        return ENTANGLED if self.lhs > self.rhs + VERDICT_TOL else INCONCLUSIVE

    @property
    def entangled(self) -> bool:
        return self.verdict == ENTANGLED

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "verdict": self.verdict,
            "family_params": dict(self.family_params),
            "pairing": self.pairing,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CriterionResult":
        return cls(doc["criterion"], float(doc["lhs"]), float(doc["rhs"]), dict(doc.get("family_params", {})),
                   doc.get("pairing", "identity"))


@dataclass(frozen=True)
class PairingRule:
    """How the second party's family is derived from the first.

    ``identity``: Q = P. ``conjugate``: Q = conj(P). ``weyl``: Q = conj(U_st^dagger P U_st).
    """

    mode: str = "identity"
    s: int = 0
    t: int = 0

    def __post_init__(self):
        if self.mode not in ("identity", "conjugate", "weyl"):
            raise ValueError(f"unknown pairing mode {self.mode!r}")
        if self.mode == "weyl" and (self.s < 0 or self.t < 0):
            raise ValueError("Weyl pairing indices must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> "PairingRule":
        """Parse ``identity``, ``conjugate`` or ``weyl:s,t``."""
        mode, _, rest = text.partition(":")
        if mode == "weyl":
            s, t = (int(x) for x in rest.split(","))
            return cls("weyl", s, t)
        if rest:
            raise ValueError(f"pairing {mode!r} takes no arguments")
        return cls(mode)

    def __str__(self):
        return f"weyl:{self.s},{self.t}" if self.mode == "weyl" else self.mode


def apply_pairing(family, rule: PairingRule, tol: float = AXIOM_TOL):
    """Second-party family obtained from ``family`` under ``rule``, re-validated."""
    if rule.mode == "identity":
        return family
    if not isinstance(family, (MumSet, GsicSet)):
        raise TypeError("pairings apply to MUM and GSIC families")
    ops = family.elements
    if rule.mode == "weyl":
        if rule.s >= family.d or rule.t >= family.d:
            raise ValueError(f"Weyl indices ({rule.s}, {rule.t}) out of range for d={family.d}")
        u = weyl_operator(family.d, rule.s, rule.t)
        ops = u.conj().T @ ops @ u
    out = family.with_elements(np.conj(ops), tag=f"{family.tag}|{rule}")
    report = axiom_residuals(out, tol)
    if not report.passed:
        raise ConsistencyError(f"paired family violates its axioms: {report}")
    return out


def expectations(x: np.ndarray, ps: np.ndarray, qs: np.ndarray, d: int) -> np.ndarray:
    """Tr((P_e (x) Q_e) X) for every e, without forming the Kronecker products."""
    t = np.asarray(x).reshape(d, d, d, d)
    return np.einsum("eji,elk,ikjl->e", ps, qs, t, optimize=True)


def local_expectations(r: np.ndarray, ops: np.ndarray) -> np.ndarray:
    """Tr(O_e r) for every e."""
    return np.einsum("eij,ji->e", ops, r).real


def _check_dims(state: BipartiteState, *families):
    for fam in families:
        if fam.d != state.d:
            raise DimensionError(f"state has d={state.d} but family has d={fam.d}")


def _radicand(value: float) -> float:
    if value < -RADICAND_TOL:
        raise ConsistencyError(f"negative radicand {value:.3e}")
    return max(value, 0.0)


def _correlation_bound(bound: float, a: np.ndarray, b: np.ndarray) -> float:
    return math.sqrt(_radicand(bound - float(a @ a)) * _radicand(bound - float(b @ b)))


def _joint(state, ps, qs):
    return expectations(state.rho, ps, qs, state.d).real


def _match_params(p, q, name):
    if p.d != q.d:
        raise DimensionError(f"families differ in dimension: {p.d} vs {q.d}")
    if abs(getattr(p, name) - getattr(q, name)) > PARAM_TOL:
        raise ParameterError(f"families must share {name}: {getattr(p, name)} vs {getattr(q, name)}")


def eval_mub_M(state: BipartiteState, mubs: MubSet) -> CriterionResult:
    _check_dims(state, mubs)
    proj = mubs.projectors
    lhs = float(_joint(state, proj, proj).sum())
    return CriterionResult(MUB_M, lhs, mubs.bound, {"m": mubs.m})


def eval_thm1_L(state: BipartiteState, mubs: MubSet) -> CriterionResult:
    _check_dims(state, mubs)
    proj = mubs.projectors
    a = local_expectations(state.rhoA, proj)
    b = local_expectations(state.rhoB, proj)
    lhs = float(np.abs(_joint(state, proj, proj) - a * b).sum())
    return CriterionResult(THM1_L, lhs, _correlation_bound(mubs.bound, a, b), {"m": mubs.m})


def eval_mum_T(state: BipartiteState, p: MumSet, q: MumSet, pairing: str = "explicit") -> CriterionResult:
    _match_params(p, q, "kappa")
    _check_dims(state, p)
    lhs = float(_joint(state, p.flat, q.flat).sum())
    return CriterionResult(MUM_T, lhs, p.bound, p.param, pairing)


def eval_thm2_S(state: BipartiteState, p: MumSet, q: MumSet, pairing: str = "explicit") -> CriterionResult:
    _match_params(p, q, "kappa")
    _check_dims(state, p)
    a = local_expectations(state.rhoA, p.flat)
    b = local_expectations(state.rhoB, q.flat)
    lhs = float(np.abs(_joint(state, p.flat, q.flat) - a * b).sum())
    return CriterionResult(THM2_S, lhs, _correlation_bound(p.bound, a, b), p.param, pairing)


def eval_gsic_J(state: BipartiteState, p: GsicSet, q: GsicSet, pairing: str = "explicit") -> CriterionResult:
    _match_params(p, q, "alpha")
    _check_dims(state, p)
    lhs = float(_joint(state, p.flat, q.flat).sum())
    return CriterionResult(GSIC_J, lhs, p.bound, p.param, pairing)


def eval_thm3_R(state: BipartiteState, p: GsicSet, q: GsicSet, pairing: str = "explicit") -> CriterionResult:
    _match_params(p, q, "alpha")
    _check_dims(state, p)
    a = local_expectations(state.rhoA, p.flat)
    b = local_expectations(state.rhoB, q.flat)
    lhs = float(np.abs(_joint(state, p.flat, q.flat) - a * b).sum())
    return CriterionResult(THM3_R, lhs, _correlation_bound(p.bound, a, b), p.param, pairing)


_PAIRED = {MUM_T: eval_mum_T, THM2_S: eval_thm2_S, GSIC_J: eval_gsic_J, THM3_R: eval_thm3_R}
_MUB = {MUB_M: eval_mub_M, THM1_L: eval_thm1_L}


def evaluate(state: BipartiteState, criterion: str, family, pairing: PairingRule | None = None) -> CriterionResult:
    """Evaluate ``criterion`` with Q derived from ``family`` by ``pairing``."""
    if criterion in _MUB:
        if pairing is not None and pairing.mode != "identity":
            raise ValueError(f"{criterion} uses the same bases on both sides; no pairing")
        return _MUB[criterion](state, family)
    if criterion not in _PAIRED:
        raise ValueError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}")
    pairing = pairing or PairingRule()
    return _PAIRED[criterion](state, family, apply_pairing(family, pairing), str(pairing))


def old_criterion_for(tag: str) -> str:
    return {THM1_L: MUB_M, THM2_S: MUM_T, THM3_R: GSIC_J}[tag]
