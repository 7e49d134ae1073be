#!/usr/bin/env python3
"""Classify periodic points for a range of n and print the summary table.

Example:
    python scripts/run_search.py --ns 4,5,6,7,8,9 --denominator-bound 8
"""

import argparse
import json
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from wardsurf.periodic import search_periodic
from wardsurf.serialize import classification_report, dumps
from wardsurf.surface import build_ward


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", default="4,5,6,7,8,9")
    ap.add_argument("--denominator-bound", type=int, default=8)
    ap.add_argument("--cap", type=int, default=10_000)
    ap.add_argument("--out-dir", default=None,
                    help="write one classification JSON per n")
    args = ap.parse_args()

    ns = [int(v) for v in args.ns.split(",")]
    out_dir = pathlib.Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)

    print(f"{'n':>3} {'genus':>5} {'sing':>5} {'centers':>7} {'other':>5} "
          f"{'total':>5} {'candidates':>10} {'eliminated':>10} {'incl':>5} {'sec':>7}")
    exit_code = 0
    for n in ns:
        surface = build_ward(n)
        t0 = time.perf_counter()
        cls = search_periodic(surface, D=args.denominator_bound, cap=args.cap)
        dt = time.perf_counter() - t0
        c = cls.count_by_label()
        print(f"{n:>3} {surface.genus:>5} {c.get('singularity', 0):>5} "
              f"{c.get('polygon-center', 0):>7} {c.get('other', 0):>5} "
              f"{len(cls.survivors):>5} {cls.candidates:>10} "
              f"{len(cls.eliminated):>10} {len(cls.inconclusive):>5} {dt:>7.1f}")
        if cls.inconclusive:
            exit_code = 3
        if out_dir:
            report = classification_report(cls, timing_seconds=dt)
            (out_dir / f"classification_n{n}.json").write_text(dumps(report))
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
