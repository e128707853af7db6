"""Random qutrit Bell-diagonal states against the c_max and c_min sufficient conditions.

Counts, for kappa = 1 MUB-projector MUMs and THM2-S, how often each condition
holds and how often the criterion actually reports Entangled. Undetected states
meeting the c_min condition are also checked for a positive partial transpose.
"""
import argparse

import numpy as np

from sepcrit import criteria as C
from sepcrit.linalg import is_psd, partial_transpose
from sepcrit.measurements import build_mub_set, mum_from_mub
from sepcrit.states import BellDiagonalSpec, bell_diagonal


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    d, kappa = 3, 1.0
    p = mum_from_mub(build_mub_set(d))
    hi = (kappa + 1) / (kappa * (d + 1))
    lo = (d - d * kappa + 2) / (kappa * d * (d + 1))
    rng = np.random.default_rng(args.seed)
    counts = dict(cmax=0, cmax_hit=0, cmin=0, cmin_hit=0, cmin_ppt=0)
    for _ in range(args.n):
        c = rng.dirichlet(np.full(d * d, 10 ** rng.uniform(-1.5, 0.5)))
        spec = BellDiagonalSpec(d, (c / c.sum()).reshape(d, d))
        state = bell_diagonal(spec)
        if spec.array.max() > hi:
            counts["cmax"] += 1
            counts["cmax_hit"] += C.evaluate(state, C.THM2_S, p, C.PairingRule("weyl", *spec.argmax)).entangled
        if spec.array.min() < lo:
            counts["cmin"] += 1
            hit = C.evaluate(state, C.THM2_S, p, C.PairingRule("weyl", *spec.argmin)).entangled
            counts["cmin_hit"] += hit
            counts["cmin_ppt"] += (not hit) and is_psd(partial_transpose(state.rho, d))
    print(f"c_max > {hi:.4f}: {counts['cmax']} states, {counts['cmax_hit']} detected")
    print(f"c_min < {lo:.4f}: {counts['cmin']} states, {counts['cmin_hit']} detected, "
          f"{counts['cmin_ppt']} undetected and PPT")


if __name__ == "__main__":
    main()
