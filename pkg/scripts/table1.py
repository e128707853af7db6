"""Detection thresholds for the Horodecki/maximally-entangled mixture, with the kappa/alpha scan.

    python scripts/table1.py --tol 1e-5 --scan --out table1.json
"""
import argparse
import json
import time

from sepcrit import harness as H


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tol", type=float, default=H.TABLE1_TOL)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--scan", action="store_true", help="repeat at 5 feasible (kappa, alpha) pairs")
    ap.add_argument("--out", help="write reports as JSON")
    args = ap.parse_args()

    t0 = time.perf_counter()
    reports = H.reproduce_table1(tol=args.tol, workers=args.workers)
    print(H.format_table1(reports))
    doc = {"reports": [dict(r.to_dict(), log=None) for r in reports]}
    if args.scan:
        doc["sensitivity"] = H.table1_sensitivity(tol=args.tol)
        spread = {}
        for row in doc["sensitivity"]:
            spread.setdefault((row["family"], row["criterion"]), []).append(row["threshold"])
        print(f"\nmax spread over the scan: {max(max(v) - min(v) for v in spread.values()):.2e}")
    print(f"elapsed {time.perf_counter() - t0:.1f} s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=1)


if __name__ == "__main__":
    main()
