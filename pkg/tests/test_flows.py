import random
from fractions import Fraction

import pytest

from wardsurf.exactfield import FieldError
from wardsurf.flows import (
    CylinderDecomposition,
    Direction,
    FlowError,
    NotPeriodicError,
    flow,
)
from wardsurf.surface import square_torus

from conftest import horizontal, rotated, ward


def alpha(ctx):
    return (2 * ctx.cos_pi(1, ctx.n) + 1) / ctx.sin_pi(1, ctx.n)


def test_torus_flow_example(torus):
    p = torus.locate(0, Fraction(1, 2), Fraction(1, 2))
    hit = flow(torus, p, Direction.horizontal(torus.ctx))
    assert hit.kind == "edge"
    assert hit.x == 1 and hit.y == Fraction(1, 2)
    assert hit.continuation == torus.locate(0, 0, Fraction(1, 2))


def test_flow_from_octagon_center(ward4):
    ctx = ward4.ctx
    p = ward4.locate(0, 0, 0)
    hit = flow(ward4, p, Direction.horizontal(ctx))
    sqrt2 = ctx.cos_pi(1, 4) * 2
    assert hit.kind == "edge"
    assert hit.x == (1 + sqrt2) * Fraction(1, 2)
    assert hit.y == 0


def test_horizontal_separatrix_reaches_singularity(ward4):
    start = ward4.vertex_point(0)
    hit = flow(ward4, start, Direction.horizontal(ward4.ctx))
    assert hit.kind == "vertex"
    assert hit.vertex_class == 0


def test_flow_reversibility(ward5):
    ctx = ward5.ctx
    rng = random.Random(7)
    d = Direction.make(ctx.cos_pi(1, 10), ctx.sin_pi(1, 10))
    back = Direction.make(-ctx.cos_pi(1, 10), -ctx.sin_pi(1, 10))
    for _ in range(10):
        x = Fraction(rng.randrange(-20, 21), 100)
        y = Fraction(rng.randrange(-20, 21), 100)
        p = ward5.locate(0, x, y)
        fwd = flow(ward5, p, d)
        bwd = flow(ward5, p, back)
        # the two hits and the start are collinear along d, start in between
        ax, ay = fwd.x - bwd.x, fwd.y - bwd.y
        assert ax * d.dy - ay * d.dx == 0
        px, py = p.x - bwd.x, p.y - bwd.y
        assert px * ay - py * ax == 0
        t_num = px * ax + py * ay
        t_den = ax * ax + ay * ay
        assert t_num.sign() >= 0 and (t_den - t_num).sign() >= 0


def test_torus_decomposition(torus):
    dec = CylinderDecomposition(torus, Direction.horizontal(torus.ctx))
    assert len(dec.cylinders) == 1
    cyl = dec.cylinders[0]
    assert cyl.modulus == 1
    assert cyl.width == 1 and cyl.height == 1


def test_torus_coords_example(torus):
    dec = CylinderDecomposition(torus, Direction.horizontal(torus.ctx))
    p = torus.locate(0, Fraction(1, 2), Fraction(1, 4))
    ci, h, x = dec.coords(p)
    assert ci == 0
    assert h == Fraction(1, 4)
    assert x == Fraction(1, 2)


def test_ward4_cylinder_structure(ward4):
    ctx = ward4.ctx
    sqrt2 = ctx.cos_pi(1, 4) * 2
    dh = horizontal(4)
    dv = CylinderDecomposition(ward4, Direction.vertical(ctx))
    assert len(dh.cylinders) == 3
    assert len(dv.cylinders) == 3
    for cyl in list(dh.cylinders) + list(dv.cylinders):
        assert cyl.modulus == 2 + sqrt2


def test_moduli_formula_small():
    for n in (3, 4, 5, 6):
        dec = horizontal(n)
        a = alpha(dec.surface.ctx)
        for cyl in dec.cylinders:
            assert cyl.modulus == a


def test_ward5_heights_multiset(ward5):
    ctx = ward5.ctx
    dec = horizontal(5)
    assert len(dec.cylinders) == 4
    scale = 2 * ctx.sin_pi(1, 10)   # rescale to a unit-circumradius 2n-gon
    s1 = ctx.sin_pi(1, 5)
    s2 = ctx.sin_pi(2, 5)
    rescaled = [c.height * scale for c in dec.cylinders]
    assert sum(1 for h in rescaled if h == s1) == 2
    assert sum(1 for h in rescaled if h == s2 - s1) == 2


def test_ward6_has_five_cylinders():
    assert len(horizontal(6).cylinders) == 5


def test_area_conservation():
    for n in (4, 5, 6):
        dec = horizontal(n)
        total = None
        for cyl in dec.cylinders:
            a = cyl.area()
            total = a if total is None else total + a
        assert total == dec.surface.area


def test_rotated_decomposition_congruent():
    for n in (4, 5):
        a = horizontal(n).geometry_multiset()
        b = rotated(n, 1).geometry_multiset()
        assert len(a) == len(b)
        for (w1, h1), (w2, h2) in zip(a, b):
            assert w1 == w2 and h1 == h2


def test_ward4_origin_is_mid_height(ward4):
    dec = horizontal(4)
    ci, h, x = dec.coords(ward4.locate(0, 0, 0))
    assert dec.cylinders[ci].height == 1
    assert h == Fraction(1, 2)


def test_ward5_origin_on_boundary_leaf(ward5):
    dec = horizontal(5)
    hits = dec.membership(ward5.locate(0, 0, 0))
    assert len(hits) == 2  # boundary point of two adjacent cylinders
    ci, h, x = dec.coords(ward5.locate(0, 0, 0))
    assert h == 0


def test_ward5_mid_cylinder_point(ward5):
    ctx = ward5.ctx
    dec = horizontal(5)
    # the cylinder just above the x-axis has height sin(pi/5)/(2 sin(pi/10))
    h5 = ctx.sin_pi(1, 5) / (2 * ctx.sin_pi(1, 10))
    p = ward5.locate(0, 0, h5 * Fraction(1, 2))
    ci, h, x = dec.coords(p)
    assert dec.cylinders[ci].height == h5
    assert h * 2 == dec.cylinders[ci].height


def test_coords_point_at_roundtrip(ward5):
    dec = horizontal(5)
    rng = random.Random(11)
    for _ in range(15):
        x = Fraction(rng.randrange(-30, 31), 80)
        y = Fraction(rng.randrange(-30, 31), 80)
        p = ward5.locate(0, x, y)
        ci, h, xx = dec.coords(p)
        assert dec.point_at(ci, xx, h) == p


def test_coords_rejects_vertices(ward4):
    dec = horizontal(4)
    with pytest.raises(FlowError):
        dec.coords(ward4.vertex_point(0))


def test_saddle_connections_recorded(ward4):
    dec = horizontal(4)
    assert dec.saddle_connections
    for sc in dec.saddle_connections:
        assert sc.start_class == 0 and sc.end_class == 0
        hx, hy = sc.holonomy
        assert hy == 0  # horizontal holonomy
        for (pid, a, b) in sc.chain:
            assert a[1] == b[1]  # each chord is horizontal


def test_non_unit_direction_rejected(ward4):
    ctx = ward4.ctx
    d = Direction.make(ctx.rational(2), ctx.one)
    with pytest.raises(FieldError):
        CylinderDecomposition(ward4, d)


def test_non_periodic_direction_raises():
    torus = square_torus()
    ctx = torus.ctx
    # slope tan(pi/8) is irrational: the line never closes up on the torus
    d = Direction.make(ctx.cos_pi(1, 8), ctx.sin_pi(1, 8))
    with pytest.raises(NotPeriodicError):
        CylinderDecomposition(torus, d, cap=200)


def test_vertical_periodic_for_even_n():
    dec = CylinderDecomposition(ward(6), Direction.vertical(ward(6).ctx))
    a = alpha(ward(6).ctx)
    assert all(c.modulus == a for c in dec.cylinders)


def test_zero_direction_rejected(ward4):
    ctx = ward4.ctx
    with pytest.raises(FlowError):
        Direction.make(ctx.zero, ctx.zero)
