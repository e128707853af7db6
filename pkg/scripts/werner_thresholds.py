"""Werner-state verdict flips for all six criteria against 2/d - 1."""
import argparse

from sepcrit import criteria as C
from sepcrit import harness as H


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--tol", type=float, default=1e-7)
    args = ap.parse_args()

    print(f"{'d':>2} {'criterion':<8} {'threshold':>12} {'2/d-1':>10}")
    for d in args.dims:
        fam = H.StateFamily("werner", d=d)
        for tag in (C.MUM_T, C.THM2_S, C.GSIC_J, C.THM3_R):
            rep = H.find_threshold(fam, H.CriterionConfig(tag, d), (-1, 1), args.tol)
            th = "none" if rep.threshold is None else f"{rep.threshold:.8f}"
            print(f"{d:>2} {tag:<8} {th:>12} {2 / d - 1:>10.6f}")
        if d in (2, 3, 5):
            for tag in (C.MUB_M, C.THM1_L):
                rep = H.find_threshold(fam, H.CriterionConfig(tag, d), (-1, 1), args.tol)
                th = "none" if rep.threshold is None else f"{rep.threshold:.8f}"
                print(f"{d:>2} {tag:<8} {th:>12} {2 / d - 1:>10.6f}")


if __name__ == "__main__":
    main()
