"""Polygon gluings modelling translation surfaces, and the Ward builder.

A surface is a list of convex positively oriented polygons placed in the
plane plus an edge pairing that identifies opposite-vector edges by
translation.  Corner angles are carried symbolically as rational multiples
of pi, so cone angles, singularities, and genus come out of exact rational
bookkeeping with no inverse trigonometry.

``build_ward(n)`` assembles the surface glued from one regular 2n-gon and
two regular n-gons (one carrying the even-direction edges, one the odd
ones), every n-gon edge identified with the opposite-direction edge of the
2n-gon.  Sides are normalized to length 1 and the 2n-gon is centered at
the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from wardsurf._geom import cross_sign
from wardsurf.exactfield import FieldContext, FieldElement, FieldError, make_context


class LocationError(ValueError):
    """A queried point does not lie on the claimed polygon."""


class SurfaceError(ValueError):
    """Invalid polygon or gluing data."""


class Polygon:
    """Convex positively oriented polygon with symbolic corner angles.

    ``edges`` are the edge vectors in counterclockwise order; vertex i is
    the start of edge i.  ``corner_angles`` holds each interior angle as a
    Fraction multiple of pi.
    """

    def __init__(self, id: int, anchor, edges, corner_angles):
        self.id = id
        self.anchor = anchor
        self.edges = tuple(edges)
        self.corner_angles = tuple(Fraction(a) for a in corner_angles)
        self._validate()

    def _validate(self):
        m = len(self.edges)
        if m < 3:
            raise SurfaceError("polygon needs at least 3 edges")
        if len(self.corner_angles) != m:
            raise SurfaceError("one corner angle per vertex required")
        zx = sum((e[0] for e in self.edges[1:]), self.edges[0][0])
        zy = sum((e[1] for e in self.edges[1:]), self.edges[0][1])
        if zx != 0 or zy != 0:
            raise SurfaceError(f"polygon {self.id}: edge vectors do not close up")
        strict = 0
        for i in range(m):
            ex, ey = self.edges[i]
            fx, fy = self.edges[(i + 1) % m]
            s = cross_sign(ex, ey, fx, fy)
            if s < 0:
                raise SurfaceError(f"polygon {self.id}: not convex/ccw at corner {i}")
            strict += s
        if strict == 0:
            raise SurfaceError(f"polygon {self.id}: degenerate")
        total = sum(self.corner_angles)
        if total != m - 2:
            raise SurfaceError(
                f"polygon {self.id}: corner angles sum to {total}*pi, expected {m - 2}*pi"
            )
        for a in self.corner_angles:
            if not 0 < a < 1:
                raise SurfaceError(f"polygon {self.id}: corner angle {a}*pi out of range")
        self._verify_angles()

    def _verify_angles(self):
        # Where representable, check -e_{i-1} = R(a*pi) e_i exactly.
        ctx = self.anchor[0].ctx
        m = len(self.edges)
        for i in range(m):
            px, py = self.edges[i - 1]
            ex, ey = self.edges[i]
            if px * px + py * py != ex * ex + ey * ey:
                continue
            a = self.corner_angles[i]
            try:
                c = ctx.cos_pi(a.numerator, a.denominator)
                s = ctx.sin_pi(a.numerator, a.denominator)
            except FieldError:
                continue
            if c * ex - s * ey != -px or s * ex + c * ey != -py:
                raise SurfaceError(
                    f"polygon {self.id}: corner {i} angle {a}*pi disagrees with edges"
                )

    def __len__(self):
        return len(self.edges)

    def __repr__(self):
        return f"Polygon(id={self.id}, {len(self.edges)} edges)"

    @cached_property
    def vertices(self) -> tuple:
        vx, vy = self.anchor
        out = [(vx, vy)]
        for ex, ey in self.edges[:-1]:
            vx = vx + ex
            vy = vy + ey
            out.append((vx, vy))
        return tuple(out)

    @cached_property
    def centroid(self) -> tuple:
        vs = self.vertices
        sx = vs[0][0]
        sy = vs[0][1]
        for vx, vy in vs[1:]:
            sx = sx + vx
            sy = sy + vy
        inv_m = Fraction(1, len(vs))
        return (sx * inv_m, sy * inv_m)

    @cached_property
    def area(self) -> FieldElement:
        vs = self.vertices
        m = len(vs)
        total = None
        for i in range(m):
            ax, ay = vs[i]
            bx, by = vs[(i + 1) % m]
            t = ax * by - ay * bx
            total = t if total is None else total + t
        return total * Fraction(1, 2)

    def classify(self, x, y):
        """('interior'|'edge'|'vertex'|'outside', index or None) for a point."""
        zeros = []
        vs = self.vertices
        for i, (ex, ey) in enumerate(self.edges):
            vx, vy = vs[i]
            s = cross_sign(ex, ey, x - vx, y - vy)
            if s < 0:
                return ("outside", None)
            if s == 0:
                zeros.append(i)
        if not zeros:
            return ("interior", None)
        if len(zeros) == 1:
            return ("edge", zeros[0])
        if len(zeros) == 2:
            i, j = zeros
            m = len(self.edges)
            if j == i + 1:
                return ("vertex", j)
            if i == 0 and j == m - 1:
                return ("vertex", 0)
        raise SurfaceError(f"polygon {self.id}: degenerate point classification {zeros}")


class Gluing:
    """Involutive pairing of polygon edges, identified by translation."""

    def __init__(self, pairs):
        table = {}
        for a, b in pairs:
            a = tuple(a)
            b = tuple(b)
            if a == b:
                raise SurfaceError(f"edge {a} glued to itself")
            if a in table or b in table:
                raise SurfaceError(f"edge appears in more than one pair: {a} ~ {b}")
            table[a] = b
            table[b] = a
        self._table = table

    def partner(self, poly: int, edge: int):
        return self._table[(poly, edge)]

    def __contains__(self, key):
        return tuple(key) in self._table

    def pairs(self):
        """Canonical sorted list of unordered pairs."""
        seen = set()
        out = []
        for a, b in self._table.items():
            if a in seen or b in seen:
                continue
            seen.add(a)
            seen.add(b)
            out.append((min(a, b), max(a, b)))
        out.sort()
        return out

    def __len__(self):
        return len(self._table) // 2


@dataclass(frozen=True)
class SurfacePoint:
    """Canonically located point: polygon id plus exact planar coordinates.

    Boundary points are stored on the smallest (polygon, edge) representative;
    vertex points carry their vertex-class id.
    """

    polygon: int
    x: FieldElement
    y: FieldElement
    vertex_class: int | None = None

    def is_vertex(self) -> bool:
        return self.vertex_class is not None

    def __repr__(self):
        tag = f", vertex_class={self.vertex_class}" if self.vertex_class is not None else ""
        return f"SurfacePoint(P{self.polygon}, {self.x.approx():.6g}, {self.y.approx():.6g}{tag})"


@dataclass(frozen=True)
class WardInfo:
    """Construction metadata the rotation map needs: which polygon carries
    which edge-direction labels, and where the n-gons were anchored."""

    n: int
    normalized: bool
    labels: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    anchor_edges: tuple[int, int]


class Surface:
    """Immutable translation surface: polygons + gluing + derived data."""

    def __init__(self, ctx: FieldContext, polygons, gluing: Gluing, ward: WardInfo | None = None):
        self.ctx = ctx
        self.polygons = tuple(polygons)
        self.gluing = gluing
        self.ward = ward
        for i, p in enumerate(self.polygons):
            if p.id != i:
                raise SurfaceError("polygon ids must be 0..len-1 in order")
        self._validate_gluing()
        self._translations = self._compute_translations()
        self._build_vertex_classes()
        self._compute_genus()

    # -- construction checks ------------------------------------------

    def _validate_gluing(self):
        count = 0
        for p in self.polygons:
            for e in range(len(p)):
                if (p.id, e) not in self.gluing:
                    raise SurfaceError(f"edge ({p.id},{e}) is unglued")
                count += 1
        if count != 2 * len(self.gluing):
            raise SurfaceError("gluing mentions unknown edges")
        for (pa, ea), (pb, eb) in self.gluing.pairs():
            ax, ay = self.polygons[pa].edges[ea]
            bx, by = self.polygons[pb].edges[eb]
            if ax + bx != 0 or ay + by != 0:
                raise SurfaceError(
                    f"paired edges ({pa},{ea}) ~ ({pb},{eb}) are not opposite vectors"
                )

    def _compute_translations(self):
        out = {}
        for (pa, ea), (pb, eb) in self.gluing.pairs():
            A = self.polygons[pa].vertices[ea]
            mb = len(self.polygons[pb])
            D = self.polygons[pb].vertices[(eb + 1) % mb]
            t = (D[0] - A[0], D[1] - A[1])
            out[(pa, ea)] = t
            out[(pb, eb)] = (-t[0], -t[1])
        return out

    def edge_translation(self, poly: int, edge: int):
        """Translation carrying edge (poly, edge) onto its partner."""
        return self._translations[(poly, edge)]

    def _build_vertex_classes(self):
        corner_class: dict[tuple[int, int], int] = {}
        classes: list[tuple[tuple[int, int], ...]] = []
        angles: list[Fraction] = []
        for p in self.polygons:
            for i in range(len(p)):
                if (p.id, i) in corner_class:
                    continue
                cycle = []
                total = Fraction(0)
                cur = (p.id, i)
                while cur not in corner_class:
                    corner_class[cur] = len(classes)
                    cycle.append(cur)
                    total += self.polygons[cur[0]].corner_angles[cur[1]]
                    q, f = self.gluing.partner(*cur)
                    cur = (q, (f + 1) % len(self.polygons[q]))
                if cur != cycle[0]:
                    raise SurfaceError("vertex walk did not close up")
                if total.denominator != 1 or total.numerator % 2 != 0:
                    raise SurfaceError(
                        f"cone angle {total}*pi at {cycle[0]} is not a multiple of 2*pi"
                    )
                classes.append(tuple(sorted(cycle)))
                angles.append(total)
        self.corner_class = corner_class
        self.vertex_classes = tuple(classes)
        self.cone_angles = tuple(int(a) // 2 for a in angles)  # multiples of 2*pi

    def _compute_genus(self):
        V = len(self.vertex_classes)
        E = sum(len(p) for p in self.polygons) // 2
        F = len(self.polygons)
        chi = V - E + F
        if (2 - chi) % 2 != 0:
            raise SurfaceError("odd Euler characteristic")
        self.genus = (2 - chi) // 2
        # Gauss-Bonnet: sum of (cone - 2*pi) must be 2*pi*(2g - 2)
        excess = sum(k - 1 for k in self.cone_angles)
        if excess != 2 * self.genus - 2:
            raise SurfaceError("cone angles disagree with the Euler characteristic")

    # -- queries --------------------------------------------------------

    @cached_property
    def area(self) -> FieldElement:
        total = self.polygons[0].area
        for p in self.polygons[1:]:
            total = total + p.area
        return total

    def singularities(self):
        """(class id, cone-angle multiple of 2*pi) for all singular classes."""
        return [(c, k) for c, k in enumerate(self.cone_angles) if k >= 2]

    def vertex_point(self, class_id: int) -> SurfacePoint:
        """Canonical SurfacePoint of a vertex class."""
        p, i = self.vertex_classes[class_id][0]
        vx, vy = self.polygons[p].vertices[i]
        return SurfacePoint(p, vx, vy, class_id)

    def locate(self, polygon: int, x, y) -> SurfacePoint:
        """Canonical SurfacePoint for planar coordinates inside a polygon."""
        ctx = self.ctx
        x = ctx.coerce(x)
        y = ctx.coerce(y)
        poly = self.polygons[polygon]
        kind, idx = poly.classify(x, y)
        if kind == "outside":
            raise LocationError(f"({x!r}, {y!r}) is outside polygon {polygon}")
        if kind == "interior":
            return SurfacePoint(polygon, x, y)
        if kind == "vertex":
            return self.vertex_point(self.corner_class[(polygon, idx)])
        partner = self.gluing.partner(polygon, idx)
        if partner < (polygon, idx):
            tx, ty = self._translations[(polygon, idx)]
            return SurfacePoint(partner[0], x + tx, y + ty)
        return SurfacePoint(polygon, x, y)

    def cross_edge(self, polygon: int, edge: int, x, y):
        """Image of an edge point under the gluing translation of that edge."""
        q, f = self.gluing.partner(polygon, edge)
        tx, ty = self._translations[(polygon, edge)]
        return q, f, x + tx, y + ty

    def __repr__(self):
        return (
            f"Surface(genus={self.genus}, polygons={len(self.polygons)}, "
            f"singularities={len(self.singularities())})"
        )


# -- builders ----------------------------------------------------------------


def build_ward(n: int, ctx: FieldContext | None = None, normalized: bool = True) -> Surface:
    """Ward surface for parameter n: one regular 2n-gon glued to two regular
    n-gons along opposite-direction edges.

    Sides have length 1 (``normalized=True``, the default) and the 2n-gon is
    centered at the origin with a horizontal bottom edge.  The unnormalized
    variant keeps Hooper's sin(pi/3) side length, which needs the larger
    conductor lcm(4n, 12).
    """
    if n < 3:
        raise FieldError(f"need n >= 3, got {n}")
    if ctx is None:
        ctx = make_context(n) if normalized else FieldContext(n, math.lcm(4 * n, 12))
    scale = ctx.rational(1) if normalized else ctx.sin_pi(1, 3)

    u = [(ctx.cos_pi(k, n) * scale, ctx.sin_pi(k, n) * scale) for k in range(2 * n)]

    # the 2n-gon carries every direction label once
    apothem = ctx.cos_pi(1, 2 * n) * scale / (ctx.sin_pi(1, 2 * n) * 2)
    half = Fraction(1, 2)
    anchor0 = (-scale * half, -apothem)
    big = Polygon(0, anchor0, u, [Fraction(n - 1, n)] * (2 * n))

    if n % 2 == 1:
        labels1 = tuple(range(0, 2 * n, 2))  # even directions
        labels2 = tuple(range(1, 2 * n, 2))  # odd directions
        k1, k2 = 1, n + 1
    else:
        labels1 = tuple(range(1, 2 * n, 2))
        labels2 = tuple(range(0, 2 * n, 2))
        if (n // 2) % 2 == 0:
            k2, k1 = n // 2, 3 * n // 2 + 1
        else:
            k1, k2 = n // 2, 3 * n // 2 + 1

    def ngon(pid: int, labels, anchor_edge: int) -> Polygon:
        glued_label = (anchor_edge + n) % (2 * n)
        if glued_label not in labels:
            raise SurfaceError("anchor edge parity mismatch in the Ward builder")
        j = labels.index(glued_label)
        vx, vy = big.vertices[(anchor_edge + 1) % (2 * n)]
        # walk back from the glued vertex to vertex 0 of the n-gon
        for ell in labels[:j]:
            vx = vx - u[ell][0]
            vy = vy - u[ell][1]
        return Polygon(pid, (vx, vy), [u[ell] for ell in labels],
                       [Fraction(n - 2, n)] * n)

    p1 = ngon(1, labels1, k1)
    p2 = ngon(2, labels2, k2)

    pairs = []
    for k in range(2 * n):
        ell = (k + n) % (2 * n)
        if ell in labels2:
            pairs.append(((0, k), (2, labels2.index(ell))))
        else:
            pairs.append(((0, k), (1, labels1.index(ell))))

    ward = WardInfo(
        n=n,
        normalized=normalized,
        labels=(tuple(range(2 * n)), labels1, labels2),
        anchor_edges=(k1, k2),
    )
    return Surface(ctx, [big, p1, p2], Gluing(pairs), ward=ward)


def square_torus(ctx: FieldContext | None = None) -> Surface:
    """Unit square with opposite sides identified: the flat torus fixture."""
    if ctx is None:
        ctx = make_context(4)
    one = ctx.one
    zero = ctx.zero
    half = Fraction(1, 2)
    sq = Polygon(
        0,
        (zero, zero),
        [(one, zero), (zero, one), (-one, zero), (zero, -one)],
        [half, half, half, half],
    )
    gl = Gluing([((0, 0), (0, 2)), ((0, 1), (0, 3))])
    return Surface(ctx, [sq], gl)
