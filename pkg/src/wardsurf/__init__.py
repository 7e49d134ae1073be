"""Exact-arithmetic engine for Ward translation surfaces.

Builds the Ward surfaces from glued regular polygons, computes cylinder
decompositions in periodic directions, realizes the affine symmetries
(parabolic twist and order-2n rotation) as exact point maps, and soundly
classifies periodic points via rational-height certificates plus orbit
closure.
"""

from wardsurf.exactfield import (
    FieldContext,
    FieldElement,
    FieldError,
    make_context,
    trig_cos,
    trig_sin,
)
from wardsurf.surface import (
    Gluing,
    LocationError,
    Polygon,
    Surface,
    SurfacePoint,
    build_ward,
    square_torus,
)
from wardsurf.flows import (
    Cylinder,
    CylinderDecomposition,
    Direction,
    NotPeriodicError,
    cylinder_decomposition,
    flow,
)
from wardsurf.affine import (
    Mat2,
    OrbitVerdict,
    RotationMap,
    TwistMap,
    orbit,
    rotation_map,
    twist_map,
    veech_matrices,
)
from wardsurf.periodic import (
    Classification,
    enumerate_candidates,
    evenly_distributed_check,
    leaf_coverage_fraction,
    rational_height_certificate,
    search_periodic,
)

__all__ = [
    "FieldContext",
    "FieldElement",
    "FieldError",
    "make_context",
    "trig_cos",
    "trig_sin",
    "Polygon",
    "Gluing",
    "Surface",
    "SurfacePoint",
    "LocationError",
    "build_ward",
    "square_torus",
    "Direction",
    "Cylinder",
    "CylinderDecomposition",
    "NotPeriodicError",
    "cylinder_decomposition",
    "flow",
    "Mat2",
    "veech_matrices",
    "TwistMap",
    "RotationMap",
    "twist_map",
    "rotation_map",
    "orbit",
    "OrbitVerdict",
    "Classification",
    "enumerate_candidates",
    "search_periodic",
    "rational_height_certificate",
    "evenly_distributed_check",
    "leaf_coverage_fraction",
]

__version__ = "0.1.0"
