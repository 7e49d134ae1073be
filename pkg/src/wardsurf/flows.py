"""Straight-line flow, saddle connections, and cylinder decompositions.

Decomposition strategy: rotate coordinates so the requested direction is
horizontal, trace the leaf through every polygon corner in both directions
until it ends on a vertex (in a periodic direction every such trace closes
up within the crossing cap), and record each traversed chord as a cut.
Between consecutive cuts each polygon falls into trapezoidal slabs that
belong to a single cylinder; chaining slabs across their right edges walks
out the cylinders.  Vertex classes act as flow obstacles, so marked regular
points (cone angle exactly 2*pi) bound cylinders just like zeros do.

All coordinates, widths, heights, and moduli are exact field elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from wardsurf._geom import cross_sign
from wardsurf.exactfield import FieldElement, FieldError
from wardsurf.surface import Surface, SurfacePoint


class NotPeriodicError(RuntimeError):
    """A separatrix failed to close up within the crossing cap."""


class FlowError(ValueError):
    """Invalid flow query (zero direction, no outgoing separatrix, ...)."""


@dataclass(frozen=True)
class Direction:
    """Projective direction, normalized so the leading nonzero coordinate
    is positive.  Decompositions additionally need dx^2 + dy^2 = 1."""

    dx: FieldElement
    dy: FieldElement

    @staticmethod
    def make(dx, dy) -> "Direction":
        sx = dx.sign()
        sy = dy.sign()
        if sx == 0 and sy == 0:
            raise FlowError("zero direction")
        lead = sx if sx != 0 else sy
        if lead < 0:
            dx, dy = -dx, -dy
        return Direction(dx, dy)

    @staticmethod
    def horizontal(ctx) -> "Direction":
        return Direction(ctx.one, ctx.zero)

    @staticmethod
    def vertical(ctx) -> "Direction":
        return Direction(ctx.zero, ctx.one)

    @staticmethod
    def rotation(ctx, k: int) -> "Direction":
        """Image of the horizontal direction under k rotation steps by pi/n."""
        return Direction.make(ctx.cos_pi(k, ctx.n), ctx.sin_pi(k, ctx.n))

    def is_parallel(self, other: "Direction") -> bool:
        return cross_sign(self.dx, self.dy, other.dx, other.dy) == 0

    def unit_frame(self):
        if self.dx * self.dx + self.dy * self.dy != 1:
            raise FieldError(
                "cylinder decomposition needs a unit direction; "
                "use Direction.horizontal/vertical/rotation"
            )
        return self.dx, self.dy

    def __repr__(self):
        return f"Direction({self.dx.approx():.6g}, {self.dy.approx():.6g})"


@dataclass(frozen=True)
class SaddleConnection:
    """Flat geodesic segment between vertex classes, no vertex inside."""

    start_class: int
    end_class: int
    holonomy: tuple
    chain: tuple  # ((polygon, (entry x, entry y), (exit x, exit y)), ...)


@dataclass(frozen=True)
class FlowHit:
    """First boundary hit of a straight-line flow inside one polygon."""

    kind: str  # "edge" or "vertex"
    polygon: int
    x: FieldElement
    y: FieldElement
    continuation: SurfacePoint | None
    vertex_class: int | None


@dataclass(frozen=True)
class Slab:
    """One trapezoidal strip of a cylinder inside a single polygon (frame
    coordinates: the cylinder direction is +X, heights run along +Y)."""

    polygon: int
    y0: FieldElement
    y1: FieldElement
    left_edge: int
    right_edge: int
    xl0: FieldElement
    sl: FieldElement
    xr0: FieldElement
    sr: FieldElement

    def x_left(self, y):
        return self.xl0 + self.sl * (y - self.y0)

    def x_right(self, y):
        return self.xr0 + self.sr * (y - self.y0)


class Cylinder:
    """Maximal flat cylinder: a cycle of slabs with exact width/height.

    Heights h' are measured from the base boundary leaf (the one hit first
    sweeping in the +Y frame direction, i.e. the bottom); the circumference
    coordinate x' starts on the left edge of the canonical first slab.
    """

    def __init__(self, index: int, slabs, height, width):
        self.index = index
        self.slabs = tuple(slabs)
        self.height = height
        self.width = width
        self.modulus = width / height
        self._inv_height = height.inverse()
        cum_a = []
        cum_s = []
        ctx = height.ctx
        a = ctx.zero
        s = ctx.zero
        for slab in self.slabs:
            cum_a.append(a)
            cum_s.append(s)
            a = a + (slab.xr0 - slab.xl0)
            s = s + (slab.sr - slab.sl)
        if s != 0:
            raise FieldError("slab slopes do not cancel around the cylinder")
        if a != width:
            raise FieldError("slab widths do not sum to the circumference")
        self.cum_a = tuple(cum_a)
        self.cum_s = tuple(cum_s)

    def height_ratio(self, h) -> FieldElement:
        return h * self._inv_height

    def area(self) -> FieldElement:
        return self.width * self.height

    def __repr__(self):
        return (
            f"Cylinder({self.index}, w~{self.width.approx():.6g}, "
            f"h~{self.height.approx():.6g}, mod~{self.modulus.approx():.6g})"
        )


def _cmp_field(a: FieldElement, b: FieldElement) -> int:
    return (a - b).sign()


_FIELD_KEY = cmp_to_key(_cmp_field)


class _FramePoly:
    """Polygon geometry transformed so the flow direction is +X."""

    __slots__ = ("pid", "verts", "edges", "ymin", "ymax", "_inv_ey", "_slope")

    def __init__(self, pid, verts, edges):
        self.pid = pid
        self.verts = verts
        self.edges = edges
        ys = sorted((v[1] for v in verts), key=_FIELD_KEY)
        self.ymin = ys[0]
        self.ymax = ys[-1]
        self._inv_ey = {}
        self._slope = {}

    def slope(self, i):
        """dx/dy of edge i (edge must be non-horizontal)."""
        s = self._slope.get(i)
        if s is None:
            ex, ey = self.edges[i]
            inv = ey.inverse()
            self._inv_ey[i] = inv
            s = ex * inv
            self._slope[i] = s
        return s

    def x_on_edge(self, i, y):
        vx, vy = self.verts[i]
        return vx + (y - vy) * self.slope(i)


class CylinderDecomposition:
    """Maximal-cylinder partition of a surface in one periodic direction."""

    def __init__(self, surface: Surface, direction: Direction, cap: int | None = None):
        self.surface = surface
        self.direction = direction
        c, s = direction.unit_frame()
        self._c = c
        self._s = s
        total_edges = sum(len(p) for p in surface.polygons)
        self.cap = cap if cap is not None else 10 * total_edges * surface.ctx.n
        self._fpolys = [
            _FramePoly(
                p.id,
                [self.to_frame(vx, vy) for vx, vy in p.vertices],
                [self._linear_to_frame(ex, ey) for ex, ey in p.edges],
            )
            for p in surface.polygons
        ]
        self._ftrans = {}
        for p in surface.polygons:
            for e in range(len(p)):
                self._ftrans[(p.id, e)] = self._linear_to_frame(
                    *surface.edge_translation(p.id, e)
                )
        self.saddle_connections: list[SaddleConnection] = []
        cuts = self._collect_cuts()
        slabs = self._build_slabs(cuts)
        self.cylinders = self._assemble(slabs)
        self._index_slabs()
        self._check_totals()

    # -- frame transforms ---------------------------------------------

    def to_frame(self, x, y):
        return (self._c * x + self._s * y, self._c * y - self._s * x)

    def from_frame(self, X, Y):
        return (self._c * X - self._s * Y, self._s * X + self._c * Y)

    _linear_to_frame = to_frame

    # -- leaf tracing ----------------------------------------------------

    def _trace(self, pid, start, sigma, budget):
        """Follow the leaf from a corner point until it hits a vertex.

        Returns (segments, arrival corner, chain) where segments are
        (polygon, y, xa, xb) chords and arrival is (polygon, vertex index).
        """
        segments = []
        chain = []
        x, y = start
        steps = 0
        while True:
            if steps > budget:
                raise NotPeriodicError(
                    f"separatrix did not close within {budget} crossings; "
                    f"direction not certified periodic"
                )
            steps += 1
            kind, idx, x_exit = self._leaf_exit(pid, x, y, sigma)
            segments.append((pid, y, x, x_exit))
            chain.append((pid, (x, y), (x_exit, y)))
            if kind == "vertex":
                return segments, (pid, idx), chain
            q, f = self.surface.gluing.partner(pid, idx)
            tx, ty = self._ftrans[(pid, idx)]
            pid, x, y = q, x_exit + tx, y + ty

    def _leaf_exit(self, pid, px, py, sigma):
        """Exit of the horizontal ray from (px, py) in frame polygon pid.

        Returns ("edge", edge index, x) for an interior crossing or
        ("vertex", vertex index, x) when the ray runs into a corner.
        """
        fp = self._fpolys[pid]
        verts = fp.verts
        m = len(verts)
        signs = [(verts[i][1] - py).sign() for i in range(m)]
        best = None  # (x, kind, idx)
        for i in range(m):
            s0 = signs[i]
            s1 = signs[(i + 1) % m]
            if s0 == 0:
                cand = (verts[i][0], "vertex", i)
            elif s0 * s1 < 0:
                cand = (fp.x_on_edge(i, py), "edge", i)
            else:
                continue
            dxs = (cand[0] - px).sign()
            if (dxs > 0) if sigma > 0 else (dxs < 0):
                if best is None or ((cand[0] - best[0]).sign() < 0) == (sigma > 0):
                    best = cand
        if best is None:
            raise FlowError(f"horizontal ray found no exit in polygon {pid}")
        x, kind, idx = best
        return kind, idx, x

    def _sector_has_horizontal(self, pid, corner, sigma) -> bool:
        """True iff the ray (sigma, 0) points strictly into the corner."""
        fp = self._fpolys[pid]
        m = len(fp.edges)
        out_ey = fp.edges[corner][1].sign()
        in_ey = fp.edges[(corner - 1) % m][1].sign()
        return sigma * out_ey < 0 and sigma * in_ey < 0

    def _collect_cuts(self):
        surface = self.surface
        cuts: list[set] = [set() for _ in surface.polygons]
        visited: set[tuple[int, int, int]] = set()
        singular = {c for c, k in surface.singularities()}
        for p in surface.polygons:
            for i in range(len(p)):
                for sigma in (1, -1):
                    key = (p.id, i, sigma)
                    if key in visited:
                        continue
                    if not self._sector_has_horizontal(p.id, i, sigma):
                        continue
                    visited.add(key)
                    start = self._fpolys[p.id].verts[i]
                    segments, arrival, chain = self._trace(
                        p.id, start, sigma, self.cap
                    )
                    visited.add((arrival[0], arrival[1], -sigma))
                    for (qid, y, xa, xb) in segments:
                        cuts[qid].add(y)
                    c0 = surface.corner_class[(p.id, i)]
                    c1 = surface.corner_class[arrival]
                    if c0 in singular and c1 in singular:
                        self._record_connection(c0, c1, chain, sigma)
        return cuts

    def _record_connection(self, c0, c1, chain, sigma):
        length = None
        world_chain = []
        for (qid, (xa, ya), (xb, yb)) in chain:
            d = xb - xa
            length = d if length is None else length + d
            world_chain.append(
                (qid, self.from_frame(xa, ya), self.from_frame(xb, yb))
            )
        hol = (length * self._c, length * self._s)
        self.saddle_connections.append(
            SaddleConnection(c0, c1, hol, tuple(world_chain))
        )

    # -- slabs and cylinders ----------------------------------------------

    def _build_slabs(self, cuts):
        slabs = []
        for fp in self._fpolys:
            inner = [
                y
                for y in cuts[fp.pid]
                if (y - fp.ymin).sign() > 0 and (fp.ymax - y).sign() > 0
            ]
            inner.sort(key=_FIELD_KEY)
            levels = [fp.ymin] + inner + [fp.ymax]
            m = len(fp.verts)
            for y0, y1 in zip(levels, levels[1:]):
                mid = (y0 + y1) * Fraction(1, 2)
                found = []
                for i in range(m):
                    a = (fp.verts[i][1] - mid).sign()
                    b = (fp.verts[(i + 1) % m][1] - mid).sign()
                    if a * b < 0:
                        found.append((fp.x_on_edge(i, mid), i))
                if len(found) != 2:
                    raise FieldError(
                        f"slab construction found {len(found)} side edges"
                    )
                (xa, ia), (xb, ib) = found
                if (xa - xb).sign() > 0:
                    (xa, ia), (xb, ib) = (xb, ib), (xa, ia)
                slabs.append(
                    Slab(
                        polygon=fp.pid,
                        y0=y0,
                        y1=y1,
                        left_edge=ia,
                        right_edge=ib,
                        xl0=fp.x_on_edge(ia, y0),
                        sl=self._fpolys[fp.pid].slope(ia),
                        xr0=fp.x_on_edge(ib, y0),
                        sr=self._fpolys[fp.pid].slope(ib),
                    )
                )
        return slabs

    def _assemble(self, slabs):
        by_key = {(s.polygon, s.left_edge, s.y0): s for s in slabs}
        if len(by_key) != len(slabs):
            raise FieldError("duplicate slab keys")

        def successor(s: Slab) -> Slab:
            q, f = self.surface.gluing.partner(s.polygon, s.right_edge)
            ty = self._ftrans[(s.polygon, s.right_edge)][1]
            nxt = by_key.get((q, f, s.y0 + ty))
            if nxt is None:
                raise FieldError("slab chain broke: cuts are not gluing-closed")
            return nxt

        remaining = {(s.polygon, s.left_edge, s.y0): s for s in slabs}
        cylinders = []
        while remaining:
            start_key = min(remaining)
            cycle = []
            s = remaining[start_key]
            while True:
                key = (s.polygon, s.left_edge, s.y0)
                if key not in remaining:
                    break
                del remaining[key]
                cycle.append(s)
                s = successor(s)
            if (s.polygon, s.left_edge, s.y0) != (
                cycle[0].polygon,
                cycle[0].left_edge,
                cycle[0].y0,
            ):
                raise FieldError("slab cycle did not close")
            # canonical rotation: smallest (polygon, left_edge, y0)
            def slab_cmp(iy):
                i, j = iy
                a, b = cycle[i], cycle[j]
                if (a.polygon, a.left_edge) != (b.polygon, b.left_edge):
                    return -1 if (a.polygon, a.left_edge) < (b.polygon, b.left_edge) else 1
                return _cmp_field(a.y0, b.y0)

            best = 0
            for i in range(1, len(cycle)):
                if slab_cmp((i, best)) < 0:
                    best = i
            cycle = cycle[best:] + cycle[:best]
            height = cycle[0].y1 - cycle[0].y0
            for s2 in cycle[1:]:
                if s2.y1 - s2.y0 != height:
                    raise FieldError("inconsistent slab heights in a cylinder")
            mid = Fraction(1, 2) * height
            width = None
            for s2 in cycle:
                w = s2.x_right(s2.y0 + mid) - s2.x_left(s2.y0 + mid)
                width = w if width is None else width + w
            cylinders.append(Cylinder(len(cylinders), cycle, height, width))
        return cylinders

    def _index_slabs(self):
        table: dict[int, list] = {p.id: [] for p in self.surface.polygons}
        for cyl in self.cylinders:
            for si, slab in enumerate(cyl.slabs):
                table[slab.polygon].append((slab, cyl.index, si))
        for pid in table:
            table[pid].sort(key=lambda t: (_FIELD_KEY(t[0].y0), t[1], t[2]))
        self._slab_table = table

    def _check_totals(self):
        total = None
        for cyl in self.cylinders:
            a = cyl.area()
            total = a if total is None else total + a
        if total != self.surface.area:
            raise FieldError("cylinder areas do not sum to the surface area")
        m0 = self.cylinders[0].modulus
        inv = m0.inverse()
        self.moduli_ratios = []
        for cyl in self.cylinders:
            r = cyl.modulus * inv
            if not r.is_rational():
                raise FieldError("cylinder moduli are not commensurate")
            self.moduli_ratios.append(r.as_rational())

    # -- point queries -----------------------------------------------------

    def membership(self, point: SurfacePoint):
        """All (cylinder index, slab) pairs whose closure contains the point."""
        X, Y = self.to_frame(point.x, point.y)
        out = []
        for slab, ci, si in self._slab_table[point.polygon]:
            if (Y - slab.y0).sign() < 0 or (slab.y1 - Y).sign() < 0:
                continue
            if (X - slab.x_left(Y)).sign() < 0 or (slab.x_right(Y) - X).sign() < 0:
                continue
            out.append((ci, slab))
        return out

    def coords(self, point: SurfacePoint):
        """(cylinder index, height h' from the base leaf, circumference x').

        Boundary points report against the cylinder above (h' = 0) first;
        singular points have no cylinder coordinates.
        """
        if point.is_vertex():
            raise FlowError("cylinder coordinates are undefined at a vertex")
        hits = self.membership(point)
        if not hits:
            raise FlowError(f"{point!r} is not covered by the decomposition")
        best = None
        for ci, slab in hits:
            X, Y = self.to_frame(point.x, point.y)
            h = Y - slab.y0
            x = (X - slab.x_left(Y)) + self._cum_offset(ci, slab, h)
            key = (h.sign() != 0, ci)  # prefer h' = 0 representation
            if best is None or key < best[0]:
                best = (key, ci, h, x)
        _, ci, h, x = best
        return ci, h, x

    def _cum_offset(self, ci, slab, h):
        cyl = self.cylinders[ci]
        si = cyl.slabs.index(slab)
        return cyl.cum_a[si] + cyl.cum_s[si] * h

    def point_at(self, cylinder_index: int, xprime, h) -> SurfacePoint:
        """Surface point with the given cylinder coordinates."""
        cyl = self.cylinders[cylinder_index]
        if h.sign() < 0 or (cyl.height - h).sign() < 0:
            raise FlowError("height outside the cylinder")
        W = cyl.width
        while xprime.sign() < 0:
            xprime = xprime + W
        while (xprime - W).sign() >= 0:
            xprime = xprime - W
        nslabs = len(cyl.slabs)
        for si in range(nslabs):
            off = cyl.cum_a[si] + cyl.cum_s[si] * h
            if si + 1 < nslabs:
                nxt = cyl.cum_a[si + 1] + cyl.cum_s[si + 1] * h
                inside = (xprime - off).sign() >= 0 and (nxt - xprime).sign() > 0
            else:
                inside = (xprime - off).sign() >= 0
            if inside:
                slab = cyl.slabs[si]
                Y = slab.y0 + h
                X = slab.x_left(Y) + (xprime - off)
                wx, wy = self.from_frame(X, Y)
                return self.surface.locate(slab.polygon, wx, wy)
        raise FlowError("circumference coordinate not covered")  # unreachable

    def heights_multiset(self):
        return sorted((c.height for c in self.cylinders), key=_FIELD_KEY)

    def geometry_multiset(self):
        """Sorted exact (width, height) pairs, for congruence comparisons."""
        return sorted(
            ((c.width, c.height) for c in self.cylinders),
            key=lambda wh: (_FIELD_KEY(wh[0]), _FIELD_KEY(wh[1])),
        )

    def __repr__(self):
        return (
            f"CylinderDecomposition({len(self.cylinders)} cylinders, "
            f"direction={self.direction!r})"
        )


def cylinder_decomposition(
    surface: Surface, direction: Direction, cap: int | None = None
) -> CylinderDecomposition:
    return CylinderDecomposition(surface, direction, cap)


# -- generic straight-line flow (public tracing primitive) -----------------


def flow(surface: Surface, point: SurfacePoint, direction: Direction) -> FlowHit:
    """First boundary hit of the straight-line flow from a point.

    Interior and edge points flow until they cross the next edge (the hit
    carries the glued continuation point); hitting a corner reports the
    vertex class instead.  Vertex starting points need an outgoing
    separatrix in the given direction.
    """
    dx, dy = direction.dx, direction.dy
    pid, px, py = point.polygon, point.x, point.y
    poly = surface.polygons[pid]
    kind, idx = poly.classify(px, py)
    if kind == "vertex":
        return _flow_from_vertex(surface, point, direction)
    if kind == "edge":
        ex, ey = poly.edges[idx]
        side = cross_sign(ex, ey, dx, dy)
        if side == 0:
            # along the edge: ends at one of its endpoints
            forward = (ex * dx + ey * dy).sign() > 0
            m = len(poly)
            vi = (idx + 1) % m if forward else idx
            return _vertex_hit(surface, pid, vi)
        if side < 0:
            # points out of this polygon: continue from the glued side
            q, f, qx, qy = surface.cross_edge(pid, idx, px, py)
            pid, px, py = q, qx, qy
    return _ray_hit(surface, pid, px, py, dx, dy)


def _vertex_hit(surface, pid, vi) -> FlowHit:
    vx, vy = surface.polygons[pid].vertices[vi]
    return FlowHit(
        kind="vertex",
        polygon=pid,
        x=vx,
        y=vy,
        continuation=None,
        vertex_class=surface.corner_class[(pid, vi)],
    )


def _ray_hit(surface, pid, px, py, dx, dy) -> FlowHit:
    poly = surface.polygons[pid]
    verts = poly.vertices
    m = len(poly)
    for i in range(m):
        ex, ey = poly.edges[i]
        D = dx * ey - dy * ex
        if D.sign() <= 0:
            continue
        wx = verts[i][0] - px
        wy = verts[i][1] - py
        T = wx * ey - wy * ex
        if T.sign() <= 0:
            continue
        U = wx * dy - wy * dx
        su = U.sign()
        if su < 0 or (U - D).sign() > 0:
            continue
        if su == 0:
            return _vertex_hit(surface, pid, i)
        if U == D:
            return _vertex_hit(surface, pid, (i + 1) % m)
        t = U * D.inverse()
        hx = verts[i][0] + t * ex
        hy = verts[i][1] + t * ey
        q, f, qx, qy = surface.cross_edge(pid, i, hx, hy)
        return FlowHit(
            kind="edge",
            polygon=pid,
            x=hx,
            y=hy,
            continuation=surface.locate(q, qx, qy),
            vertex_class=None,
        )
    raise FlowError("ray found no exit (degenerate polygon or zero direction)")


def _flow_from_vertex(surface, point, direction) -> FlowHit:
    dx, dy = direction.dx, direction.dy
    for (pid, vi) in surface.vertex_classes[point.vertex_class]:
        poly = surface.polygons[pid]
        m = len(poly)
        ax, ay = poly.edges[vi]
        bx, by = poly.edges[(vi - 1) % m]
        bx, by = -bx, -by
        inside = cross_sign(ax, ay, dx, dy) > 0 and cross_sign(dx, dy, bx, by) > 0
        vx, vy = poly.vertices[vi]
        if inside:
            return _ray_hit(surface, pid, vx, vy, dx, dy)
        if cross_sign(ax, ay, dx, dy) == 0 and (ax * dx + ay * dy).sign() > 0:
            return _vertex_hit(surface, pid, (vi + 1) % m)
        if cross_sign(dx, dy, bx, by) == 0 and (bx * dx + by * dy).sign() > 0:
            return _vertex_hit(surface, pid, (vi - 1) % m)
    raise FlowError("no outgoing separatrix at this vertex in that direction")
