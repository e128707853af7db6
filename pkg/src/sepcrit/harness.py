"""Threshold searches and parameter sweeps over one-parameter state families."""
from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from . import criteria as C
from .measurements import (build_gsic_set, build_mub_set, build_mum_set, feasible_grid, max_feasible_alpha,
                           max_feasible_kappa, mum_from_mub, weyl_heisenberg_sic)
from .states import BellDiagonalSpec, bell_diagonal, horodecki_3x3, maximally_entangled, mix, werner

log = logging.getLogger(__name__)

PRESCAN_POINTS = 32
TABLE1_A = (0.125, 0.375, 0.625, 0.875)
TABLE1_TOL = 1e-5


class NonMonotoneError(ValueError):
    def __init__(self, flips, scan):
        super().__init__(f"verdict flips {flips} times across the pre-scan; bisection refused")
        self.flips = flips
        self.scan = scan


@dataclass(frozen=True)
class CriterionConfig:
    """A criterion plus everything needed to rebuild its measurement family.

    ``construction`` picks the family builder: ``gell-mann`` (default),
    ``mub`` (kappa = 1 MUMs from MUB projectors) or ``sic`` (Weyl-Heisenberg
    SIC, alpha = 1/d^2, d in {2, 3}).
    """

    criterion: str
    d: int
    kappa: float | None = None
    alpha: float | None = None
    m: int | None = None
    pairing: str = "identity"
    construction: str = "gell-mann"

    def __post_init__(self):
        if self.criterion not in C.CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")

    @cached_property
    def family(self):
        if self.criterion in (C.MUB_M, C.THM1_L):
            return build_mub_set(self.d, self.m)
        if self.criterion in (C.MUM_T, C.THM2_S):
            if self.construction == "mub":
                return mum_from_mub(build_mub_set(self.d))
            kappa = self.kappa if self.kappa is not None else max_feasible_kappa(self.d) * (1 - 1e-12)
            return build_mum_set(self.d, kappa)
        if self.construction == "sic":
            return weyl_heisenberg_sic(self.d)
        alpha = self.alpha if self.alpha is not None else max_feasible_alpha(self.d) * (1 - 1e-12)
        return build_gsic_set(self.d, alpha)

    @cached_property
    def rule(self) -> C.PairingRule:
        return C.PairingRule.parse(self.pairing)

    @cached_property
    def partner(self):
        if self.criterion in (C.MUB_M, C.THM1_L):
            return self.family
        return C.apply_pairing(self.family, self.rule)

    def evaluate(self, state) -> C.CriterionResult:
        fam = self.family
        if self.criterion == C.MUB_M:
            return C.eval_mub_M(state, fam)
        if self.criterion == C.THM1_L:
            return C.eval_thm1_L(state, fam)
        fn = {C.MUM_T: C.eval_mum_T, C.THM2_S: C.eval_thm2_S, C.GSIC_J: C.eval_gsic_J, C.THM3_R: C.eval_thm3_R}
        return fn[self.criterion](state, fam, self.partner, self.pairing)

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None}
        out.update(getattr(self.family, "param", {"m": getattr(self.family, "m", None)}))
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "CriterionConfig":
        return cls(**{k: doc[k] for k in ("criterion", "d", "kappa", "alpha", "m", "pairing", "construction")
                      if k in doc})


@dataclass(frozen=True)
class StateFamily:
    """One-parameter state family.

    kind
        ``werner`` (parameter g, needs ``d``), ``mix`` (parameter p: p * Horodecki(a)
        + (1-p) |phi><phi|, needs ``a``), ``bell`` (parameter c: weight c on
        |psi_st>, the rest spread uniformly, needs ``d``, ``s``, ``t``).
    """

    kind: str
    d: int = 3
    a: float | None = None
    s: int = 0
    t: int = 0

    @property
    def parameter(self) -> str:
        return {"werner": "g", "mix": "p", "bell": "c"}[self.kind]

    @property
    def label(self) -> str:
        if self.kind == "werner":
            return f"werner(d={self.d})"
        if self.kind == "mix":
            return f"mix(a={self.a})"
        return f"bell(d={self.d}, s={self.s}, t={self.t})"

    @cached_property
    def _parts(self):
        if self.kind == "mix":
            if self.a is None:
                raise ValueError("mix family needs a")
            return horodecki_3x3(self.a), maximally_entangled(3)
        return None

    def state(self, x: float):
        if self.kind == "werner":
            return werner(self.d, x)
        if self.kind == "mix":
            rho, phi = self._parts
            return mix(x, rho, phi)
        if self.kind == "bell":
            n = self.d * self.d
            c = np.full((self.d, self.d), (1.0 - x) / (n - 1))
            c[self.s, self.t] = x
            c /= c.sum()
            return bell_diagonal(BellDiagonalSpec(self.d, c))
        raise ValueError(f"unknown state family {self.kind!r}")

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class ThresholdReport:
    family: str
    parameter: str
    config: dict
    bracket: tuple
    threshold: float | None
    iterations: int
    residual: float
    final_bracket: tuple | None = None
    endpoint_verdicts: tuple = ()
    log: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["log"] = [list(x) for x in self.log]
        return out


def _verdict(family: StateFamily, config: CriterionConfig, x: float) -> bool:
    return config.evaluate(family.state(x)).entangled


def find_threshold(family: StateFamily, config: CriterionConfig, bracket=(-1.0, 1.0),
                   tol: float = 1e-6) -> ThresholdReport:
    """Locate the single verdict flip of ``config`` along ``family`` by bisection.

    A uniform pre-scan of 32 points comes first. No flip gives a report with
    ``threshold=None``; more than one raises :class:`NonMonotoneError`.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError(f"invalid bracket {bracket}")
    xs = np.linspace(lo, hi, PRESCAN_POINTS)
    scan = [(float(x), _verdict(family, config, float(x))) for x in xs]
    flips = [i for i in range(len(scan) - 1) if scan[i][1] != scan[i + 1][1]]
    base = dict(family=family.label, parameter=family.parameter, config=config.to_dict(), bracket=(lo, hi),
                endpoint_verdicts=(scan[0][1], scan[-1][1]))
    if not flips:
        return ThresholdReport(threshold=None, iterations=0, residual=float("nan"), log=scan, **base)
    if len(flips) > 1:
        raise NonMonotoneError(len(flips), scan)
    i = flips[0]
    a, b = scan[i][0], scan[i + 1][0]
    va = scan[i][1]
    trail = []
    iterations = 0
    while b - a > tol:
        mid = 0.5 * (a + b)
        vm = _verdict(family, config, mid)
        trail.append((mid, vm))
        if vm == va:
            a = mid
        else:
            b = mid
        iterations += 1
    log.debug("%s %s: flip in [%.9f, %.9f] after %d steps", family.label, config.criterion, a, b, iterations)
    return ThresholdReport(threshold=0.5 * (a + b), iterations=iterations, residual=b - a,
                           final_bracket=(a, b), log=scan + trail, **base)


def table1_configs(kappa: float | None = None, alpha: float | None = None) -> list[CriterionConfig]:
    """MUM-T, THM2-S, GSIC-J, THM3-R on Gell-Mann families with conjugate pairing, d = 3."""
    return [CriterionConfig(tag, 3, kappa=kappa, pairing="conjugate") for tag in (C.MUM_T, C.THM2_S)] + \
           [CriterionConfig(tag, 3, alpha=alpha, pairing="conjugate") for tag in (C.GSIC_J, C.THM3_R)]


def _pmap(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as ex:
        return list(ex.map(fn, items))


def reproduce_table1(a_values=TABLE1_A, kappa: float | None = None, alpha: float | None = None,
                     tol: float = TABLE1_TOL, workers: int = 1) -> list[ThresholdReport]:
    """Largest mixing weight p still detected, per (a, criterion).

    ``kappa``/``alpha`` default to the largest values the Gell-Mann
    construction reaches in d = 3.
    """
    configs = table1_configs(kappa, alpha)
    jobs = [(a, cfg) for a in a_values for cfg in configs]
    return _pmap(lambda job: find_threshold(StateFamily("mix", a=job[0]), job[1], (0.0, 1.0), tol), jobs, workers)


def table1_sensitivity(a_values=TABLE1_A, count: int = 5, tol: float = TABLE1_TOL) -> list[dict]:
    """Horodecki-mixture thresholds at ``count`` feasible (kappa, alpha) pairs."""
    rows = []
    for kappa, alpha in zip(feasible_grid("mum", 3, count), feasible_grid("gsic", 3, count)):
        for rep in reproduce_table1(a_values, kappa, alpha, tol):
            rows.append({"kappa": kappa, "alpha": alpha, "family": rep.family,
                         "criterion": rep.config["criterion"], "threshold": rep.threshold})
    return rows


def format_table1(reports: list[ThresholdReport]) -> str:
    by_a: dict[str, dict[str, float | None]] = {}
    for rep in reports:
        by_a.setdefault(rep.family, {})[rep.config["criterion"]] = rep.threshold
    fmt = lambda v: "   none" if v is None else f"{v:.4f}"
    lines = [f"{'family':<16} {'MUM-T':>8} {'GSIC-J':>8} {'THM2-S':>8} {'THM3-R':>8}"]
    for fam, row in by_a.items():
        cols = " ".join(f"{fmt(row.get(t)):>8}" for t in (C.MUM_T, C.GSIC_J, C.THM2_S, C.THM3_R))
        lines.append(f"{fam:<16} {cols}")
    return "\n".join(lines)


@dataclass
class SweepRow:
    param: float
    criterion: str
    lhs: float
    rhs: float
    margin: float
    verdict: str
    config: dict = field(default_factory=dict)


def sweep(family: StateFamily, grid, configs: list[CriterionConfig], workers: int = 1) -> list[SweepRow]:
    """Evaluate every config at every grid point; rows ordered grid-major."""
    def run(x):
        state = family.state(float(x))
        out = []
        for cfg in configs:
            r = cfg.evaluate(state)
            out.append(SweepRow(float(x), r.criterion, r.lhs, r.rhs, r.margin, r.verdict, cfg.to_dict()))
        return out
    return [row for rows in _pmap(run, list(grid), workers) for row in rows]


CSV_COLUMNS = ("param", "criterion", "lhs", "rhs", "margin", "verdict")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([repr(r.param), r.criterion, repr(r.lhs), repr(r.rhs), repr(r.margin), r.verdict])
    return buf.getvalue()


def grid_from_spec(spec) -> np.ndarray:
    """A list of values, or ``{"start", "stop", "num"}`` for a linspace."""
    if isinstance(spec, dict):
        return np.linspace(spec["start"], spec["stop"], int(spec["num"]))
    return np.asarray(spec, dtype=float)
