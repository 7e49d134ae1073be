"""Versioned JSON formats: surfaces, decomposition reports, search reports.

Field elements serialize as exact power-basis coordinate vectors of
rational "num/den" strings; every report that prints a decimal marks it
"(approx)" and keeps the exact vector alongside.  Surface round-trips are
byte-identical (sorted keys, fixed separators, no timestamps).
"""

from __future__ import annotations

import json
from fractions import Fraction

from wardsurf.exactfield import FieldContext, FieldElement
from wardsurf.flows import CylinderDecomposition
from wardsurf.periodic import Classification
from wardsurf.surface import Gluing, Polygon, Surface, SurfacePoint, WardInfo

SURFACE_FORMAT = "wardsurf-surface"
SURFACE_VERSION = 1


def field_to_json(x: FieldElement) -> list[str]:
    return [str(c) for c in x.to_fractions()]


def field_from_json(ctx: FieldContext, coeffs) -> FieldElement:
    return ctx.from_fractions([Fraction(c) for c in coeffs])


def point_to_json(p: SurfacePoint) -> dict:
    out = {
        "polygon": p.polygon,
        "x": field_to_json(p.x),
        "y": field_to_json(p.y),
        "x_approx": p.x.decimal(10),
        "y_approx": p.y.decimal(10),
    }
    if p.vertex_class is not None:
        out["vertex_class"] = p.vertex_class
    return out


def surface_to_dict(s: Surface) -> dict:
    return {
        "format": SURFACE_FORMAT,
        "version": SURFACE_VERSION,
        "context": {
            "n": s.ctx.n,
            "conductor": s.ctx.conductor,
            "degree": s.ctx.degree,
            "min_poly": list(s.ctx.min_poly),
        },
        "polygons": [
            {
                "id": p.id,
                "anchor": [field_to_json(p.anchor[0]), field_to_json(p.anchor[1])],
                "edges": [[field_to_json(ex), field_to_json(ey)] for ex, ey in p.edges],
                "corner_angles": [str(a) for a in p.corner_angles],
            }
            for p in s.polygons
        ],
        "gluing": [[list(a), list(b)] for a, b in s.gluing.pairs()],
        "ward": None
        if s.ward is None
        else {
            "n": s.ward.n,
            "normalized": s.ward.normalized,
            "labels": [list(l) for l in s.ward.labels],
            "anchor_edges": list(s.ward.anchor_edges),
        },
        "derived": {
            "genus": s.genus,
            "cone_angle_multiples": list(s.cone_angles),
            "singularities": [[c, k] for c, k in s.singularities()],
            "area": field_to_json(s.area),
            "area_approx": s.area.decimal(10),
        },
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def surface_to_json(s: Surface) -> str:
    return dumps(surface_to_dict(s))


def surface_from_dict(data: dict) -> Surface:
    if data.get("format") != SURFACE_FORMAT:
        raise ValueError(f"not a {SURFACE_FORMAT} file")
    if data.get("version") != SURFACE_VERSION:
        raise ValueError(f"unsupported surface format version {data.get('version')}")
    cinfo = data["context"]
    ctx = FieldContext(cinfo["n"], cinfo["conductor"])
    if list(ctx.min_poly) != list(cinfo["min_poly"]):
        raise ValueError("minimal polynomial mismatch in surface file")
    polygons = []
    for pdata in data["polygons"]:
        anchor = (
            field_from_json(ctx, pdata["anchor"][0]),
            field_from_json(ctx, pdata["anchor"][1]),
        )
        edges = [
            (field_from_json(ctx, ex), field_from_json(ctx, ey))
            for ex, ey in pdata["edges"]
        ]
        angles = [Fraction(a) for a in pdata["corner_angles"]]
        polygons.append(Polygon(pdata["id"], anchor, edges, angles))
    gluing = Gluing([(tuple(a), tuple(b)) for a, b in data["gluing"]])
    ward = None
    if data.get("ward"):
        w = data["ward"]
        ward = WardInfo(
            n=w["n"],
            normalized=w["normalized"],
            labels=tuple(tuple(l) for l in w["labels"]),
            anchor_edges=tuple(w["anchor_edges"]),
        )
    surface = Surface(ctx, polygons, gluing, ward=ward)
    derived = data.get("derived", {})
    if derived and derived.get("genus") != surface.genus:
        raise ValueError("stored genus disagrees with the reconstruction")
    return surface


def surface_from_json(text: str) -> Surface:
    return surface_from_dict(json.loads(text))


def decomposition_report(dec: CylinderDecomposition, direction_spec: str) -> dict:
    cylinders = []
    for cyl in dec.cylinders:
        cylinders.append(
            {
                "index": cyl.index,
                "width": field_to_json(cyl.width),
                "width_approx": cyl.width.decimal(10),
                "height": field_to_json(cyl.height),
                "height_approx": cyl.height.decimal(10),
                "modulus": field_to_json(cyl.modulus),
                "modulus_approx": cyl.modulus.decimal(10),
                "strips": [
                    {
                        "polygon": slab.polygon,
                        "height_interval": [
                            field_to_json(slab.y0),
                            field_to_json(slab.y1),
                        ],
                        "left_edge": slab.left_edge,
                        "right_edge": slab.right_edge,
                    }
                    for slab in cyl.slabs
                ],
            }
        )
    mods = [c.modulus for c in dec.cylinders]
    return {
        "format": "wardsurf-decomposition",
        "version": 1,
        "direction": {
            "spec": direction_spec,
            "dx": field_to_json(dec.direction.dx),
            "dy": field_to_json(dec.direction.dy),
        },
        "cylinders": cylinders,
        "cylinder_count": len(cylinders),
        "moduli_all_equal": all(m == mods[0] for m in mods),
        "moduli_ratios": [str(r) for r in dec.moduli_ratios],
        "note": "decimal fields are (approx); exact values are the coefficient vectors",
    }


def classification_report(
    cls: Classification, witness_samples: int = 10, timing_seconds: float | None = None
) -> dict:
    samples = []
    for e in cls.eliminated[:witness_samples]:
        samples.append(
            {
                "seed": point_to_json(e.seed),
                "word": list(e.witness.word),
                "decomposition_index": e.witness.decomposition_index,
                "cylinder_index": e.witness.cylinder_index,
                "ratio": field_to_json(e.witness.ratio),
                "ratio_approx": e.witness.ratio.decimal(10),
            }
        )
    counts = cls.count_by_label()
    report = {
        "format": "wardsurf-classification",
        "version": 1,
        "parameters": {
            "n": cls.surface.ward.n if cls.surface.ward else None,
            "denominator_bound": cls.denominator_bound,
            "cap": cls.cap,
        },
        "candidates": cls.candidates,
        "survivors": [
            {
                "point": point_to_json(s.point),
                "orbit_size": s.orbit_size,
                "label": s.label,
            }
            for s in cls.survivors
        ],
        "counts": {
            "total": len(cls.survivors),
            "singularities": counts.get("singularity", 0),
            "polygon_centers": counts.get("polygon-center", 0),
            "other": counts.get("other", 0),
        },
        "eliminated_count": len(cls.eliminated),
        "witness_samples": samples,
        "inconclusive": [point_to_json(p) for p in cls.inconclusive],
    }
    if timing_seconds is not None:
        report["timing_seconds"] = round(timing_seconds, 3)
    return report
