"""Veech group matrices and affine symmetries realized as exact point maps.

The two generators that matter for orbits are the parabolic twist phi,
acting on each cylinder of a decomposition as a Dehn twist power (the
positive shear [[1, a],[0, 1]] on cylinder coordinates), and the order-2n
rotation psi, realized piecewise: the 2n-gon rotates in place about its
center, and each n-gon rotates and then translates onto the other n-gon's
position.  Exactness of the re-gluing is verified edge-for-edge when the
map is built.

Orbit exploration is a breadth-first closure under the generators and
their inverses, three-valued: Finite (closed orbit), Infinite (some
visited point has an irrational height ratio in one of the consulted
cylinder decompositions, which is a sound non-periodicity certificate),
or Inconclusive at the exploration cap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from wardsurf.exactfield import FieldContext, FieldElement, FieldError
from wardsurf.flows import CylinderDecomposition, FlowError
from wardsurf.surface import Surface, SurfacePoint


class Mat2:
    """Exact 2x2 matrix over the field."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    @staticmethod
    def of(ctx: FieldContext, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return Mat2(ctx.coerce(a), ctx.coerce(b), ctx.coerce(c), ctx.coerce(d))

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __pow__(self, e: int) -> "Mat2":
        if e < 0:
            return self.inverse() ** (-e)
        ctx = self.a.ctx
        result = Mat2(ctx.one, ctx.zero, ctx.zero, ctx.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return (
            self.a == other.a
            and self.b == other.b
            and self.c == other.c
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Mat2":
        inv = self.det().inverse()
        return Mat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def conjugate_by(self, y: "Mat2") -> "Mat2":
        """y * self * y^-1."""
        return y * self * y.inverse()

    def apply(self, x, y):
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == 1 and self.d == 1

    def __repr__(self):
        return (
            f"Mat2([{self.a.approx():.6g}, {self.b.approx():.6g}; "
            f"{self.c.approx():.6g}, {self.d.approx():.6g}])"
        )


def veech_matrices(ctx: FieldContext) -> dict[str, Mat2]:
    """The standard generator matrices for the Ward surface with this n.

    Keys: A, B, C, mu, R, AB_mu (= mu*(A*B)*mu^-1), BC_mu, and the
    positive horizontal shear ``shear`` = (AB_mu)^-1 = [[1, a],[0, 1]] with
    a = (2 cos(pi/n) + 1)/sin(pi/n).
    """
    n = ctx.n
    one = ctx.one
    zero = ctx.zero
    cos = ctx.cos_pi(1, n)
    sin = ctx.sin_pi(1, n)
    csc = sin.inverse()
    cot = cos * csc
    A = Mat2(-one, -one, zero, one)
    B = Mat2(-one, cos * 2, zero, one)
    C = Mat2(zero, -one, -one, zero)
    mu = Mat2(csc, -cot, zero, one)
    R = Mat2(cos, -sin, sin, cos)
    AB_mu = (A * B).conjugate_by(mu)
    BC_mu = (B * C).conjugate_by(mu)
    return {
        "A": A,
        "B": B,
        "C": C,
        "mu": mu,
        "R": R,
        "AB_mu": AB_mu,
        "BC_mu": BC_mu,
        "shear": AB_mu.inverse(),
    }


def shear_modulus(ctx: FieldContext) -> FieldElement:
    """Common horizontal modulus a = (2 cos(pi/n) + 1)/sin(pi/n)."""
    return (ctx.cos_pi(1, ctx.n) * 2 + 1) / ctx.sin_pi(1, ctx.n)


class TwistMap:
    """Parabolic point map along one cylinder decomposition.

    Each cylinder is twisted the smallest number of times that makes the
    result one global affine map; with commensurate moduli that shear is
    a' = lcm of the moduli, and a point at cylinder coordinates (x', h')
    moves to (x' + a'*h' mod w, h').  Boundary leaves stay pointwise fixed.
    """

    def __init__(self, decomposition: CylinderDecomposition, power: int = 1):
        self.decomposition = decomposition
        self.power = power
        mods = [c.modulus for c in decomposition.cylinders]
        base = mods[0]
        ratios = []
        inv = base.inverse()
        for m in mods:
            r = m * inv
            if not r.is_rational():
                raise FieldError(
                    "cannot build a parabolic map: incommensurate moduli"
                )
            ratios.append(r.as_rational())
        import math as _math

        num = _math.lcm(*(r.numerator for r in ratios))
        den = _math.gcd(*(r.denominator for r in ratios))
        q = Fraction(num, den)
        self.shear = base * q  # the global shear coefficient a'
        self.twists = [int(q / r) for r in ratios]  # per-cylinder twist power

    def label(self) -> str:
        if self.power == 1:
            return "phi"
        if self.power == -1:
            return "phi^-1"
        return f"phi^{self.power}"

    def inverse(self) -> "TwistMap":
        inv = TwistMap.__new__(TwistMap)
        inv.decomposition = self.decomposition
        inv.power = -self.power
        inv.shear = self.shear
        inv.twists = self.twists
        return inv

    def apply(self, point: SurfacePoint) -> SurfacePoint:
        if point.is_vertex():
            return point
        dec = self.decomposition
        ci, h, x = dec.coords(point)
        if h.sign() == 0:
            return point
        return dec.point_at(ci, x + self.shear * h * self.power, h)


class RotationMap:
    """The order-2n symmetry psi (and its powers) as a piecewise map.

    Points of the 2n-gon rotate about the origin; points of each n-gon
    rotate and then translate onto the other n-gon.  The construction
    verifies that rotated-and-translated polygons coincide with their
    targets edge-for-edge and that the edge pairing is preserved.
    """

    def __init__(self, surface: Surface, power: int = 1):
        if surface.ward is None:
            raise FieldError("rotation map needs a Ward-built surface")
        self.surface = surface
        self.power = power
        ctx = surface.ctx
        n = surface.ward.n
        self.order = 2 * n
        self._step = self._build_step(ctx, n)
        self._tables: dict[int, list] = {}
        full = self._table(self.order)
        for pid, (tp, M, t) in enumerate(full):
            if tp != pid or not M.is_identity() or t[0] != 0 or t[1] != 0:
                raise FieldError("rotation map is not of order 2n")

    def _build_step(self, ctx, n):
        surface = self.surface
        R = Mat2(ctx.cos_pi(1, n), -ctx.sin_pi(1, n), ctx.sin_pi(1, n), ctx.cos_pi(1, n))
        labels = surface.ward.labels
        zero = ctx.zero
        step: list[tuple[int, Mat2, tuple]] = [(0, R, (zero, zero))]
        plan = {1: 2, 2: 1}
        for src in (1, 2):
            dst = plan[src]
            lsrc, ldst = labels[src], labels[dst]
            t = None
            for j, ell in enumerate(lsrc):
                tgt = ldst.index((ell + 1) % (2 * n))
                vs = surface.polygons[src].vertices[j]
                vd = surface.polygons[dst].vertices[tgt]
                rx, ry = R.apply(*vs)
                cand = (vd[0] - rx, vd[1] - ry)
                if t is None:
                    t = cand
                elif cand[0] != t[0] or cand[1] != t[1]:
                    raise FieldError(
                        "rotation does not carry one n-gon onto the other"
                    )
            step.append((dst, R, t))
        # the 2n-gon must map onto itself vertex-for-vertex
        big = surface.polygons[0]
        vert_set = set(big.vertices)
        for v in big.vertices:
            if R.apply(*v) not in vert_set:
                raise FieldError("rotation does not preserve the 2n-gon")
        self._check_gluing_respected(step)
        return step

    def _check_gluing_respected(self, step):
        """The image of every glued edge pair must again be a glued pair."""
        surface = self.surface
        edge_image = {}
        for p in surface.polygons:
            tp, M, t = step[p.id]
            m = len(p)
            imgs = [M.apply(*v) for v in p.vertices]
            imgs = [(x + t[0], y + t[1]) for x, y in imgs]
            tgt = surface.polygons[tp]
            start = tgt.vertices.index(imgs[0])
            for e in range(m):
                if tgt.vertices[(start + e) % m] != imgs[e]:
                    raise FieldError("rotated polygon does not match its target")
                edge_image[(p.id, e)] = (tp, (start + e) % m)
        for (a, b) in surface.gluing.pairs():
            ia, ib = edge_image[a], edge_image[b]
            if surface.gluing.partner(*ia) != ib:
                raise FieldError("rotation does not respect the gluing")

    def _table(self, k: int):
        k %= self.order
        cached = self._tables.get(k)
        if cached is not None:
            return cached
        ctx = self.surface.ctx
        ident = Mat2(ctx.one, ctx.zero, ctx.zero, ctx.one)
        zero = ctx.zero
        table = [(pid, ident, (zero, zero)) for pid in range(len(self.surface.polygons))]
        for _ in range(k):
            new = []
            for pid in range(len(table)):
                tp, M, t = table[pid]
                tp2, M2, t2 = self._step[tp]
                nt = M2.apply(*t)
                new.append((tp2, M2 * M, (nt[0] + t2[0], nt[1] + t2[1])))
            table = new
        self._tables[k] = table
        return table

    def label(self) -> str:
        if self.power == 1:
            return "psi"
        if self.power == -1:
            return "psi^-1"
        return f"psi^{self.power}"

    def inverse(self) -> "RotationMap":
        inv = RotationMap.__new__(RotationMap)
        inv.surface = self.surface
        inv.power = -self.power
        inv.order = self.order
        inv._step = self._step
        inv._tables = self._tables
        return inv

    def apply(self, point: SurfacePoint) -> SurfacePoint:
        table = self._table(self.power)
        tp, M, t = table[point.polygon]
        x, y = M.apply(point.x, point.y)
        return self.surface.locate(tp, x + t[0], y + t[1])


@dataclass(frozen=True)
class Witness:
    """Re-checkable certificate that a point has infinite affine orbit."""

    word: tuple[str, ...]
    point: SurfacePoint
    decomposition_index: int
    cylinder_index: int
    ratio: FieldElement


@dataclass(frozen=True)
class OrbitVerdict:
    status: str  # "finite" | "infinite" | "inconclusive"
    points: frozenset = field(default_factory=frozenset)
    witness: Witness | None = None
    visited: int = 0
    cap: int = 0

    def is_finite(self):
        return self.status == "finite"

    def is_infinite(self):
        return self.status == "infinite"


def _irrational_height(point: SurfacePoint, decomps) -> tuple[int, int, FieldElement] | None:
    """First (decomposition, cylinder, ratio) with an irrational height ratio.

    A point is only disqualified by a cylinder that actually contains it;
    boundary points have ratio 0 or 1 in both neighbors and always pass.
    """
    if point.is_vertex():
        return None
    for di, dec in enumerate(decomps):
        for ci, slab in dec.membership(point):
            _, Y = dec.to_frame(point.x, point.y)
            ratio = dec.cylinders[ci].height_ratio(Y - slab.y0)
            if not ratio.is_rational():
                return di, ci, ratio
    return None


def orbit(
    point: SurfacePoint,
    generators,
    cap: int = 10_000,
    check_decomps=(),
) -> OrbitVerdict:
    """Breadth-first orbit closure under the generators and their inverses.

    Every newly visited point is screened with the rational-height
    certificate against ``check_decomps``; the first failure proves the
    orbit infinite and is returned as a witness.  If the closure completes
    within ``cap`` points the orbit is certified finite.
    """
    if cap < 1:
        raise ValueError(f"cap must be positive, got {cap}")
    gens = []
    for g in generators:
        gens.append(g)
        gens.append(g.inverse())
    words: dict[SurfacePoint, tuple[str, ...]] = {point: ()}
    bad = _irrational_height(point, check_decomps)
    if bad is not None:
        return OrbitVerdict(
            status="infinite",
            witness=Witness((), point, bad[0], bad[1], bad[2]),
            visited=1,
            cap=cap,
        )
    queue = deque([point])
    while queue:
        if len(words) > cap:
            return OrbitVerdict(status="inconclusive", visited=len(words), cap=cap)
        p = queue.popleft()
        for g in gens:
            q = g.apply(p)
            if q in words:
                continue
            words[q] = words[p] + (g.label(),)
            bad = _irrational_height(q, check_decomps)
            if bad is not None:
                return OrbitVerdict(
                    status="infinite",
                    witness=Witness(words[q], q, bad[0], bad[1], bad[2]),
                    visited=len(words),
                    cap=cap,
                )
            queue.append(q)
    return OrbitVerdict(
        status="finite", points=frozenset(words), visited=len(words), cap=cap
    )


def twist_map(decomposition: CylinderDecomposition, power: int = 1) -> TwistMap:
    return TwistMap(decomposition, power)


def rotation_map(surface: Surface, power: int = 1) -> RotationMap:
    return RotationMap(surface, power)


def verify_witness(seed: SurfacePoint, witness: Witness, maps: dict, decomps) -> bool:
    """Recompute a witness from scratch: apply the word to the seed and
    re-test the height ratio.  Used by the soundness checks."""
    p = seed
    for label in witness.word:
        p = maps[label].apply(p)
    if p != witness.point:
        return False
    dec = decomps[witness.decomposition_index]
    hits = dec.membership(p)
    for ci, slab in hits:
        if ci == witness.cylinder_index:
            _, Y = dec.to_frame(p.x, p.y)
            ratio = dec.cylinders[ci].height_ratio(Y - slab.y0)
            return ratio == witness.ratio and not ratio.is_rational()
    return False
