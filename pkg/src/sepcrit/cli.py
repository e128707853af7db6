"""Command-line entry point.

Exit codes: 0 success, 2 invalid parameters, 3 construction infeasible
(positivity), 4 internal consistency failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import harness as H
from .criteria import CRITERIA, ConsistencyError
from .linalg import ConvergenceError
from .measurements import (ParameterError, PositivityInfeasible, axiom_residuals, build_gsic_set, build_mub_set,
                           build_mum_set, mum_from_mub, weyl_heisenberg_sic)
from .serialize import dump, load
from .states import (BellDiagonalSpec, BipartiteState, StateError, bell_diagonal, horodecki_3x3, maximally_entangled,
                     mix, random_state, werner)

EXIT_OK, EXIT_PARAM, EXIT_INFEASIBLE, EXIT_CONSISTENCY = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def _kv(text: str) -> dict:
    out = {}
    for part in filter(None, text.split(",")):
        key, sep, val = part.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {part!r}")
        out[key.strip()] = val.strip()
    return out


def parse_state(spec: str) -> BipartiteState:
    """State from a file path or ``kind:key=value,...``.

    Kinds: ``werner:d=3,g=-0.5``, ``horodecki:a=0.5``, ``mix:a=0.125,p=0.9``,
    ``maxent:d=3``, ``bell:d=3,s=0,t=0,c=0.7``,
    ``random:d=3,kind=separable,seed=1``.
    """
    if Path(spec).is_file():
        obj = load(spec)
        if not isinstance(obj, BipartiteState):
            raise UsageError(f"{spec} does not hold a state")
        return obj
    kind, _, rest = spec.partition(":")
    kw = _kv(rest)
    try:
        if kind == "werner":
            return werner(int(kw["d"]), float(kw["g"]))
        if kind == "horodecki":
            return horodecki_3x3(float(kw["a"]))
        if kind == "mix":
            return mix(float(kw["p"]), horodecki_3x3(float(kw["a"])), maximally_entangled(3))
        if kind == "maxent":
            return maximally_entangled(int(kw["d"]))
        if kind == "bell":
            fam = H.StateFamily("bell", d=int(kw["d"]), s=int(kw.get("s", 0)), t=int(kw.get("t", 0)))
            return fam.state(float(kw["c"]))
        if kind == "bell-table":
            d = int(kw["d"])
            c = np.array([float(x) for x in kw["c"].split(";")]).reshape(d, d)
            return bell_diagonal(BellDiagonalSpec(d, c))
        if kind == "random":
            return random_state(int(kw["d"]), kw.get("kind", "full-rank"), int(kw.get("seed", 0)))
    except KeyError as exc:
        raise UsageError(f"state spec {spec!r} is missing {exc.args[0]!r}") from None
    raise UsageError(f"unknown state spec {spec!r}")


def _family(args):
    if args.family == "mub":
        return build_mub_set(args.d, args.m)
    if args.family == "mum":
        if args.construction == "mub":
            return mum_from_mub(build_mub_set(args.d))
        if args.kappa is None:
            raise UsageError("--kappa is required for mum")
        return build_mum_set(args.d, args.kappa)
    if args.construction == "sic":
        return weyl_heisenberg_sic(args.d)
    if args.alpha is None:
        raise UsageError("--alpha is required for gsic")
    return build_gsic_set(args.d, args.alpha)


def _emit(args, payload, rows=None):
    if args.format == "csv" and rows is not None:
        sys.stdout.write(H.rows_to_csv(rows))
    else:
        json.dump(payload, sys.stdout, indent=1, default=float)
        sys.stdout.write("\n")


def cmd_validate(args) -> int:
    fam = _family(args)
    report = axiom_residuals(fam, args.tol)
    if args.out:
        dump(fam, args.out)
    payload = {"family": report.family, "residuals": report.residuals, "tol": report.tol, "pass": report.passed}
    if args.format == "csv":
        sys.stdout.write("axiom,residual\n" + "".join(f"{k},{v!r}\n" for k, v in report.residuals.items()))
    else:
        _emit(args, payload)
    return EXIT_OK if report.passed else EXIT_CONSISTENCY


def _config(args, criterion) -> H.CriterionConfig:
    return H.CriterionConfig(criterion, args.d, kappa=args.kappa, alpha=args.alpha, m=args.m,
                             pairing=args.pairing, construction=args.construction)


def cmd_evaluate(args) -> int:
    state = parse_state(args.state)
    args.d = state.d
    result = _config(args, args.criterion).evaluate(state)
    row = H.SweepRow(float("nan"), result.criterion, result.lhs, result.rhs, result.margin, result.verdict)
    _emit(args, result.to_dict(), [row])
    return EXIT_OK


def cmd_threshold(args) -> int:
    if args.family == "werner":
        fam = H.StateFamily("werner", d=args.d)
        bracket = (args.lo if args.lo is not None else -1.0, args.hi if args.hi is not None else 1.0)
    else:
        if args.a is None:
            raise UsageError("--a is required for the mix family")
        fam = H.StateFamily("mix", a=args.a)
        args.d = 3
        bracket = (args.lo if args.lo is not None else 0.0, args.hi if args.hi is not None else 1.0)
    rep = H.find_threshold(fam, _config(args, args.criterion), bracket, args.tol)
    payload = rep.to_dict()
    if not args.verbose:
        payload.pop("log")
    if args.format == "csv":
        sys.stdout.write("family,criterion,threshold,lo,hi,iterations\n")
        lo, hi = rep.final_bracket or (float("nan"), float("nan"))
        sys.stdout.write(f"{rep.family},{rep.config['criterion']},{rep.threshold},{lo!r},{hi!r},{rep.iterations}\n")
    else:
        _emit(args, payload)
    return EXIT_OK


def cmd_table1(args) -> int:
    reports = H.reproduce_table1(kappa=args.kappa, alpha=args.alpha, tol=args.tol, workers=args.workers)
    if args.format == "csv":
        sys.stdout.write("family,criterion,threshold\n")
        for r in reports:
            sys.stdout.write(f"{r.family},{r.config['criterion']},{r.threshold!r}\n")
    elif args.format == "table":
        print(H.format_table1(reports))
    else:
        payload = {"reports": [dict(r.to_dict(), log=None) for r in reports]}
        if args.scan:
            payload["sensitivity"] = H.table1_sensitivity(tol=args.tol)
        _emit(args, payload)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = json.loads(Path(args.config).read_text())
    fam = H.StateFamily(**cfg["family"])
    grid = H.grid_from_spec(cfg["grid"])
    configs = [H.CriterionConfig.from_dict(c) for c in cfg["criteria"]]
    rows = H.sweep(fam, grid, configs, workers=args.workers)
    _emit(args, {"family": fam.to_dict(), "rows": [r.__dict__ for r in rows]}, rows)
    return EXIT_OK


def _family_params(p):
    p.add_argument("--kappa", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--construction", choices=("gell-mann", "mub", "sic"), default="gell-mann")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sepcrit", description="Measurement-based separability criteria.")
    ap.add_argument("--format", choices=("json", "csv", "table"), default="json")
    ap.add_argument("-v", "--verbose", action="store_true")
    # same options after the subcommand; SUPPRESS keeps the top-level value when absent
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a measurement family against its defining relations")
    p.add_argument("--family", choices=("mub", "mum", "gsic"), required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", help="also write the family as JSON")
    _family_params(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", parents=[common], help="evaluate one criterion on one state")
    p.add_argument("--state", required=True)
    p.add_argument("--criterion", choices=CRITERIA, required=True)
    p.add_argument("--pairing", default="identity")
    _family_params(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("threshold", parents=[common], help="bisect the verdict flip along a state family")
    p.add_argument("--family", choices=("werner", "mix"), required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--a", type=float)
    p.add_argument("--criterion", choices=CRITERIA, required=True)
    p.add_argument("--pairing", default="identity")
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--tol", type=float, default=1e-6)
    _family_params(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("table1", parents=[common], help="detection thresholds for the Horodecki mixture")
    p.add_argument("--kappa", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--tol", type=float, default=H.TABLE1_TOL)
    p.add_argument("--scan", action="store_true", help="add the kappa/alpha sensitivity scan")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("sweep", parents=[common], help="evaluate criteria on a grid, configured by a JSON file")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except PositivityInfeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConsistencyError, ConvergenceError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (ParameterError, StateError, UsageError, ValueError, TypeError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
