import math
from fractions import Fraction

import pytest

from wardsurf.exactfield import make_context
from wardsurf.surface import (
    Gluing,
    LocationError,
    Polygon,
    Surface,
    SurfaceError,
    build_ward,
    square_torus,
)

from conftest import ward


def test_ward_examples():
    s4 = ward(4)
    assert s4.genus == 3
    assert s4.singularities() == [(0, 5)]  # one cone point of angle 10*pi

    s5 = ward(5)
    assert s5.genus == 4

    s7 = ward(7)
    assert s7.genus == (3 * 7 - 7 - 3 - math.gcd(7, 3)) // 2 + 1 == 6
    assert len(s7.singularities()) == 1

    s9 = ward(9)
    assert len(s9.singularities()) == 3


def test_three_polygons_and_shape():
    for n in (4, 5, 6):
        s = ward(n)
        assert len(s.polygons) == 3
        assert len(s.polygons[0]) == 2 * n
        assert len(s.polygons[1]) == len(s.polygons[2]) == n


def test_unit_side_lengths():
    for n in (3, 4, 5, 6, 8):
        s = ward(n)
        for p in s.polygons:
            for ex, ey in p.edges:
                assert ex * ex + ey * ey == 1


def test_even_n_has_two_vertical_sides():
    for n in (4, 6, 8):
        s = ward(n)
        vertical = [
            e for (ex, ey) in s.polygons[0].edges for e in [ex] if ex.sign() == 0
        ]
        assert len(vertical) == 2


def test_gluing_is_involution_with_opposite_vectors():
    s = ward(5)
    for p in s.polygons:
        for e in range(len(p)):
            q, f = s.gluing.partner(p.id, e)
            assert s.gluing.partner(q, f) == (p.id, e)
            assert (p.id, e) != (q, f)
            assert p.id != q  # the Ward gluing never pairs a polygon with itself
            ex, ey = p.edges[e]
            fx, fy = s.polygons[q].edges[f]
            assert ex + fx == 0 and ey + fy == 0


def test_gauss_bonnet_consistency():
    for n in range(3, 13):
        s = ward(n)
        # sum of (cone - 2pi) = 2pi(2g - 2), in multiples of 2pi
        assert sum(k - 1 for k in s.cone_angles) == 2 * s.genus - 2


def test_singularity_counts():
    for n in range(4, 13):
        s = ward(n)
        expected = 3 if n % 3 == 0 else 1
        assert len(s.singularities()) == expected


def test_n3_is_a_marked_torus():
    s = ward(3)
    assert s.genus == 1
    assert s.singularities() == []
    assert len(s.vertex_classes) == 3
    assert all(k == 1 for k in s.cone_angles)


def test_square_torus_fixture(torus):
    assert torus.genus == 1
    assert len(torus.vertex_classes) == 1
    assert torus.cone_angles == (1,)
    assert torus.singularities() == []
    assert torus.area == 1


def test_locate_interior(ward4):
    p = ward4.locate(0, 0, 0)
    assert p.polygon == 0 and p.vertex_class is None
    assert p.x == 0 and p.y == 0


def test_locate_outside_raises(ward4):
    with pytest.raises(LocationError):
        ward4.locate(0, 10, 10)


def test_locate_edge_points_canonicalize_across_gluing(ward4):
    ctx = ward4.ctx
    # midpoint of the octagon's bottom edge, and of its glued partner
    big = ward4.polygons[0]
    v0 = big.vertices[0]
    mid = (v0[0] + Fraction(1, 2), v0[1])
    a = ward4.locate(0, mid[0], mid[1])
    q, f = ward4.gluing.partner(0, 0)
    tx, ty = ward4.edge_translation(0, 0)
    b = ward4.locate(q, mid[0] + tx, mid[1] + ty)
    assert a == b


def test_vertex_canonicalization_all_representatives(ward4):
    # every corner representative of the unique singularity locates equally
    reps = ward4.vertex_classes[0]
    assert len(reps) == 16  # 8 + 4 + 4 corners
    expected = ward4.vertex_point(0)
    for (pid, vi) in reps:
        vx, vy = ward4.polygons[pid].vertices[vi]
        assert ward4.locate(pid, vx, vy) == expected


def test_octagon_apothem(ward4):
    ctx = ward4.ctx
    big = ward4.polygons[0]
    # right vertical edge sits at x = (1 + sqrt2)/2
    sqrt2 = ctx.cos_pi(1, 4) * 2
    assert max(v[0] for v in big.vertices) == (1 + sqrt2) * Fraction(1, 2)


def test_area_matches_closed_form(ward4):
    # octagon + 2 unit squares, all side 1: 2(1+sqrt2) + 2
    ctx = ward4.ctx
    sqrt2 = ctx.cos_pi(1, 4) * 2
    assert ward4.area == 2 * (1 + sqrt2) + 2


def test_unnormalized_variant_builds():
    s = build_ward(4, normalized=False)
    assert s.ctx.conductor == 48
    side = s.ctx.sin_pi(1, 3)
    ex, ey = s.polygons[0].edges[0]
    assert ex * ex + ey * ey == side * side
    assert s.genus == 3


def test_polygon_validation_rejects_open_chain():
    ctx = make_context(4)
    one, zero = ctx.one, ctx.zero
    with pytest.raises(SurfaceError):
        Polygon(0, (zero, zero), [(one, zero), (zero, one), (-one, zero)],
                [Fraction(1, 2)] * 3)


def test_gluing_validation_rejects_mismatched_vectors():
    ctx = make_context(4)
    one, zero = ctx.one, ctx.zero
    half = Fraction(1, 2)
    sq = Polygon(0, (zero, zero),
                 [(one, zero), (zero, one), (-one, zero), (zero, -one)],
                 [half] * 4)
    with pytest.raises(SurfaceError):
        Surface(ctx, [sq], Gluing([((0, 0), (0, 1)), ((0, 2), (0, 3))]))


def test_serialized_choice_is_recorded(ward5):
    assert ward5.ward is not None
    assert ward5.ward.anchor_edges == (1, 6)
    assert ward5.ward.labels[1] == tuple(range(0, 10, 2))
