#!/usr/bin/env python3
"""Render the standard gallery: surfaces, horizontal cylinders, and the
classified periodic points, as deterministic SVG files.

Example:
    python scripts/render_figures.py --ns 4,5,6 --out-dir out/figures
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from wardsurf.flows import CylinderDecomposition, Direction
from wardsurf.periodic import search_periodic
from wardsurf.surface import build_ward
from wardsurf.svgout import render_surface


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", default="4,5,6")
    ap.add_argument("--out-dir", default="out/figures")
    ap.add_argument("--denominator-bound", type=int, default=4)
    ap.add_argument("--cap", type=int, default=5_000)
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for n in (int(v) for v in args.ns.split(",")):
        surface = build_ward(n)
        (out / f"surface_n{n}.svg").write_text(
            render_surface(surface, title=f"Ward surface n={n}")
        )
        dec = CylinderDecomposition(surface, Direction.horizontal(surface.ctx))
        (out / f"cylinders_n{n}.svg").write_text(
            render_surface(surface, decomposition=dec,
                           title=f"horizontal cylinders n={n}")
        )
        cls = search_periodic(surface, D=args.denominator_bound, cap=args.cap)
        marks = [
            (s.point, "singularity" if s.label == "singularity" else "center")
            for s in cls.survivors
        ]
        (out / f"periodic_points_n{n}.svg").write_text(
            render_surface(surface, marks=marks, title=f"periodic points n={n}")
        )
        print(f"n={n}: wrote surface, cylinders, periodic points "
              f"({len(cls.survivors)} survivors)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
