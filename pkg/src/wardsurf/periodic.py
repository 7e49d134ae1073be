"""Sound periodic-point search on Ward surfaces.

The search enumerates every intersection of rational-height leaves (at
denominators up to D) of two transverse cylinder decompositions; by the
rational height criterion any periodic point with height denominators
at most D in both decompositions is among the candidates.  Candidates are
then eliminated by cheap rational-height certificates on rotation images
(the first irrational height ratio is a sound witness of an infinite
orbit), and the few remaining points are closed under the twist and the
rotation: a closed orbit certifies genuine periodicity because those two
maps generate a finite-index subgroup of the affine group.

Verdicts are three-valued and honest: candidates that neither certify
finite nor infinite within the cap are reported as inconclusive, never
silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from wardsurf.affine import (
    RotationMap,
    TwistMap,
    Witness,
    _irrational_height,
    orbit,
    verify_witness,
)
from wardsurf.exactfield import FieldElement
from wardsurf.flows import CylinderDecomposition, Direction, _FIELD_KEY
from wardsurf.surface import Surface, SurfacePoint


def _cmp_point(a: SurfacePoint, b: SurfacePoint) -> int:
    if a.polygon != b.polygon:
        return -1 if a.polygon < b.polygon else 1
    s = (a.x - b.x).sign()
    if s:
        return s
    return (a.y - b.y).sign()


_POINT_KEY = cmp_to_key(_cmp_point)


def _fraction_levels(D: int) -> list[Fraction]:
    out = {Fraction(0), Fraction(1)}
    for d in range(1, D + 1):
        for a in range(d + 1):
            out.add(Fraction(a, d))
    return sorted(out)


@dataclass(frozen=True)
class CandidateGrid:
    """All leaf-intersection candidates at denominator bound D, plus the
    forced inclusions (polygon centers and singular vertices)."""

    surface: Surface
    denominator_bound: int
    decompositions: tuple[CylinderDecomposition, CylinderDecomposition]
    points: tuple[SurfacePoint, ...]


def enumerate_candidates(
    surface: Surface,
    D: int,
    decomps: tuple[CylinderDecomposition, CylinderDecomposition] | None = None,
) -> CandidateGrid:
    """Intersect the rational-height leaves of two transverse decompositions.

    Defaults to the horizontal decomposition and its rotation by pi/n.
    """
    if D < 1:
        raise ValueError(f"denominator bound must be >= 1, got {D}")
    ctx = surface.ctx
    if decomps is None:
        dec_a = CylinderDecomposition(surface, Direction.horizontal(ctx))
        dec_b = CylinderDecomposition(surface, Direction.rotation(ctx, 1))
    else:
        dec_a, dec_b = decomps
    if dec_a.direction.is_parallel(dec_b.direction):
        raise ValueError("the two decompositions must be transverse")

    levels = _fraction_levels(D)

    # direction of B leaves in the A frame: x = x0 + (y - y0) * slope
    bx, by = dec_b.direction.dx, dec_b.direction.dy
    cx, cy = dec_a.to_frame(bx, by)
    if cy.sign() < 0:
        cx, cy = -cx, -cy
    slope = cx * cy.inverse()

    a_segments: dict[int, list] = {p.id: [] for p in surface.polygons}
    for cyl in dec_a.cylinders:
        for f in levels:
            h = cyl.height * f
            for slab in cyl.slabs:
                y = slab.y0 + h
                a_segments[slab.polygon].append((y, slab.x_left(y), slab.x_right(y)))

    b_segments: dict[int, list] = {p.id: [] for p in surface.polygons}
    for cyl in dec_b.cylinders:
        for f in levels:
            h = cyl.height * f
            for slab in cyl.slabs:
                yb = slab.y0 + h
                p1 = dec_b.from_frame(slab.x_left(yb), yb)
                p2 = dec_b.from_frame(slab.x_right(yb), yb)
                q1 = dec_a.to_frame(*p1)
                q2 = dec_a.to_frame(*p2)
                if (q2[1] - q1[1]).sign() < 0:
                    q1, q2 = q2, q1
                b_segments[slab.polygon].append((q1[0], q1[1], q2[1]))

    found: set[SurfacePoint] = set()
    for pid in a_segments:
        asegs = a_segments[pid]
        bsegs = b_segments[pid]
        aballs = [
            (y._ball_bounds(), xa._ball_bounds(), xb._ball_bounds())
            for (y, xa, xb) in asegs
        ]
        bballs = [
            (x1._ball_bounds(), y1._ball_bounds(), y2._ball_bounds())
            for (x1, y1, y2) in bsegs
        ]
        for i, (y, xa, xb) in enumerate(asegs):
            (ylo, yhi), (xalo, _), (_, xbhi) = aballs[i]
            for j, (bx1, by1, by2) in enumerate(bsegs):
                (x1lo, x1hi), (y1lo, y1hi), (y2lo, y2hi) = bballs[j]
                # certain misses only; anything uncertain is checked exactly
                if yhi < y1lo or ylo > y2hi:
                    continue
                if (y - by1).sign() < 0 or (by2 - y).sign() < 0:
                    continue
                x = bx1 + (y - by1) * slope
                if (x - xa).sign() < 0 or (xb - x).sign() < 0:
                    continue
                wx, wy = dec_a.from_frame(x, y)
                found.add(surface.locate(pid, wx, wy))

    for p in surface.polygons:
        cxy = p.centroid
        found.add(surface.locate(p.id, cxy[0], cxy[1]))
    for class_id, _k in surface.singularities():
        found.add(surface.vertex_point(class_id))

    points = tuple(sorted(found, key=_POINT_KEY))
    return CandidateGrid(surface, D, (dec_a, dec_b), points)


@dataclass(frozen=True)
class CertificateResult:
    passed: bool
    decomposition_index: int | None = None
    cylinder_index: int | None = None
    ratio: FieldElement | None = None


def rational_height_certificate(point: SurfacePoint, decomps) -> CertificateResult:
    """Pass iff the height ratio is rational in every cylinder containing
    the point, for every listed decomposition."""
    bad = _irrational_height(point, decomps)
    if bad is None:
        return CertificateResult(True)
    return CertificateResult(False, bad[0], bad[1], bad[2])


@dataclass(frozen=True)
class Elimination:
    seed: SurfacePoint
    witness: Witness


@dataclass(frozen=True)
class Survivor:
    point: SurfacePoint
    orbit_size: int
    label: str  # "singularity" | "polygon-center" | "other"


@dataclass
class Classification:
    surface: Surface
    denominator_bound: int
    cap: int
    candidates: int
    survivors: list[Survivor]
    eliminated: list[Elimination]
    inconclusive: list[SurfacePoint]

    @property
    def survivor_points(self):
        return [s.point for s in self.survivors]

    def count_by_label(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for s in self.survivors:
            out[s.label] = out.get(s.label, 0) + 1
        return out

    def summary(self) -> str:
        c = self.count_by_label()
        return (
            f"n={self.surface.ward.n if self.surface.ward else '?'}: "
            f"{len(self.survivors)} periodic points "
            f"({c.get('singularity', 0)} singularities, "
            f"{c.get('polygon-center', 0)} centers, {c.get('other', 0)} other); "
            f"{len(self.eliminated)} eliminated, "
            f"{len(self.inconclusive)} inconclusive "
            f"[D={self.denominator_bound}, cap={self.cap}]"
        )


def _label_point(surface: Surface, p: SurfacePoint) -> str:
    if p.is_vertex():
        k = surface.cone_angles[p.vertex_class]
        return "singularity" if k >= 2 else "other"
    for poly in surface.polygons:
        cx, cy = poly.centroid
        if p == surface.locate(poly.id, cx, cy):
            return "polygon-center"
    return "other"


def search_periodic(
    surface: Surface,
    D: int = 8,
    cap: int = 10_000,
    rotation_checks: tuple[int, ...] = (1, -1, 2, -2),
) -> Classification:
    """Classify the candidate grid: eliminated / periodic / inconclusive.

    Certificates are run on rotation images psi^k first (cheap, kills
    almost everything), then each surviving candidate's orbit under
    {twist, rotation} is closed breadth-first with the same screening.
    """
    if surface.ward is None:
        raise ValueError("periodic search expects a Ward-built surface")
    ctx = surface.ctx
    dec_h = CylinderDecomposition(surface, Direction.horizontal(ctx))
    dec_r1 = CylinderDecomposition(surface, Direction.rotation(ctx, 1))
    dec_r2 = CylinderDecomposition(surface, Direction.rotation(ctx, 2))
    grid = enumerate_candidates(surface, D, (dec_h, dec_r1))

    psi = RotationMap(surface)
    psi_inv = psi.inverse()
    phi = TwistMap(dec_h)
    cert_decomps = (dec_h, dec_r1)

    eliminated: list[Elimination] = []
    inconclusive: list[SurfacePoint] = []
    orbits: list[frozenset] = []
    claimed: set[SurfacePoint] = set()

    for p in grid.points:
        if p in claimed:
            continue
        witness = _screen(p, psi, psi_inv, rotation_checks, cert_decomps)
        if witness is not None:
            eliminated.append(Elimination(p, witness))
            continue
        verdict = orbit(
            p, [phi, psi], cap=cap, check_decomps=(dec_h, dec_r1, dec_r2)
        )
        if verdict.is_infinite():
            eliminated.append(Elimination(p, verdict.witness))
        elif verdict.is_finite():
            orbits.append(verdict.points)
            claimed.update(verdict.points)
        else:
            inconclusive.append(p)

    survivors: list[Survivor] = []
    seen: set[SurfacePoint] = set()
    for pts in orbits:
        for q in pts:
            if q not in seen:
                seen.add(q)
                survivors.append(Survivor(q, len(pts), _label_point(surface, q)))
    survivors.sort(key=lambda s: _POINT_KEY(s.point))

    return Classification(
        surface=surface,
        denominator_bound=D,
        cap=cap,
        candidates=len(grid.points),
        survivors=survivors,
        eliminated=eliminated,
        inconclusive=inconclusive,
    )


def _screen(p, psi, psi_inv, rotation_checks, decomps) -> Witness | None:
    """Rational-height certificates on psi^k images; first failure wins."""
    bad = _irrational_height(p, decomps)
    if bad is not None:
        return Witness((), p, bad[0], bad[1], bad[2])
    images = {0: p}
    kmax = max((k for k in rotation_checks if k > 0), default=0)
    kmin = min((k for k in rotation_checks if k < 0), default=0)
    q = p
    for k in range(1, kmax + 1):
        q = psi.apply(q)
        images[k] = q
    q = p
    for k in range(-1, kmin - 1, -1):
        q = psi_inv.apply(q)
        images[k] = q
    for k in rotation_checks:
        q = images[k]
        bad = _irrational_height(q, decomps)
        if bad is not None:
            word = ("psi",) * k if k > 0 else ("psi^-1",) * (-k)
            return Witness(word, q, bad[0], bad[1], bad[2])
    return None


def recheck_elimination(e: Elimination, surface: Surface, decomps, maps) -> bool:
    """Independent witness replay, used by the soundness acceptance check."""
    return verify_witness(e.seed, e.witness, maps, decomps)


def evenly_distributed_check(
    decomposition: CylinderDecomposition, points
) -> bool:
    """True iff the points lie on one closed leaf with all circular gaps
    equal to width/count."""
    coords = [decomposition.coords(p) for p in points]
    cylinders = {c[0] for c in coords}
    if len(cylinders) != 1:
        raise ValueError("points are not in a single cylinder")
    ci = cylinders.pop()
    h0 = coords[0][1]
    for _, h, _x in coords[1:]:
        if h != h0:
            raise ValueError("points are not on a common closed leaf")
    cyl = decomposition.cylinders[ci]
    xs = sorted((x for _, _, x in coords), key=_FIELD_KEY)
    count = len(xs)
    expected = cyl.width * Fraction(1, count)
    for a, b in zip(xs, xs[1:]):
        if b - a != expected:
            return False
    wrap = cyl.width - (xs[-1] - xs[0])
    return wrap == expected


def _convex_chord(fverts, y):
    """Horizontal chord [x_lo, x_hi] of a convex polygon at level y, or None."""
    xs = []
    m = len(fverts)
    for i in range(m):
        x0, y0 = fverts[i]
        x1, y1 = fverts[(i + 1) % m]
        s0 = (y0 - y).sign()
        s1 = (y1 - y).sign()
        if s0 == 0:
            xs.append(x0)
        elif s0 * s1 < 0:
            t = (y - y0) / (y1 - y0)
            xs.append(x0 + t * (x1 - x0))
    if not xs:
        return None
    lo = xs[0]
    hi = xs[0]
    for x in xs[1:]:
        if (x - lo).sign() < 0:
            lo = x
        if (x - hi).sign() > 0:
            hi = x
    return lo, hi


def leaf_coverage_fraction(
    decomposition: CylinderDecomposition,
    cylinder_index: int,
    h,
    region,
) -> FieldElement:
    """Exact fraction of the closed leaf at height h lying inside a region.

    ``region`` is a list of (polygon id, convex vertex list) parts in world
    coordinates; parts are assumed pairwise disjoint.
    """
    cyl = decomposition.cylinders[cylinder_index]
    ctx = decomposition.surface.ctx
    if h.sign() < 0 or (cyl.height - h).sign() < 0:
        raise ValueError("height outside the cylinder")
    frame_region = [
        (pid, [decomposition.to_frame(x, y) for (x, y) in verts])
        for pid, verts in region
    ]
    total = ctx.zero
    for slab in cyl.slabs:
        y = slab.y0 + h
        xl = slab.x_left(y)
        xr = slab.x_right(y)
        for pid, fverts in frame_region:
            if pid != slab.polygon:
                continue
            chord = _convex_chord(fverts, y)
            if chord is None:
                continue
            lo, hi = chord
            a = lo if (lo - xl).sign() > 0 else xl
            b = hi if (xr - hi).sign() > 0 else xr
            if (b - a).sign() > 0:
                total = total + (b - a)
    return total / cyl.width
