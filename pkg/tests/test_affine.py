import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wardsurf.affine import (
    Mat2,
    RotationMap,
    TwistMap,
    orbit,
    rotation_map,
    shear_modulus,
    twist_map,
    veech_matrices,
    verify_witness,
)
from wardsurf.flows import CylinderDecomposition, Direction

from conftest import horizontal, rotated, ward


def random_interior_point(surface, rng, polygon=None):
    """Random rational-weight convex combination of polygon vertices."""
    pid = rng.randrange(len(surface.polygons)) if polygon is None else polygon
    poly = surface.polygons[pid]
    weights = [Fraction(rng.randrange(1, 8)) for _ in poly.vertices]
    total = sum(weights)
    x = None
    y = None
    for w, (vx, vy) in zip(weights, poly.vertices):
        q = w / total
        x = vx * q if x is None else x + vx * q
        y = vy * q if y is None else y + vy * q
    return surface.locate(pid, x, y)


def test_veech_matrices_n4(ward4):
    ctx = ward4.ctx
    m = veech_matrices(ctx)
    sqrt2 = ctx.cos_pi(1, 4) * 2
    ab = m["AB_mu"]
    assert (ab.a, ab.b, ab.c, ab.d) == (ctx.one, -(2 + sqrt2), ctx.zero, ctx.one)
    minus_i = Mat2(-ctx.one, ctx.zero, ctx.zero, -ctx.one)
    assert m["BC_mu"] ** 4 == minus_i
    # R = -(BC)^mu is the order-8 rotation
    assert -(m["BC_mu"].a) == m["R"].a and -(m["BC_mu"].b) == m["R"].b


def test_rotation_matrix_order_and_det():
    for n in (4, 5, 6, 7):
        ctx = ward(n).ctx
        R = veech_matrices(ctx)["R"]
        assert R.det() == 1
        assert (R ** (2 * n)).is_identity()
        for k in range(1, 2 * n):
            assert not (R ** k).is_identity()


def test_shear_inverse_relation():
    for n in (4, 5, 6):
        ctx = ward(n).ctx
        m = veech_matrices(ctx)
        sh = m["shear"]
        assert sh.a == 1 and sh.c == 0 and sh.d == 1
        assert sh.b == shear_modulus(ctx)
        assert (sh * m["AB_mu"]).is_identity()


def test_twist_fixes_boundary_and_half_height_period(ward4):
    dec = horizontal(4)
    phi = twist_map(dec)
    assert phi.shear == shear_modulus(ward4.ctx)
    assert phi.twists == [1, 1, 1]
    # boundary leaf point: fixed
    cyl = dec.cylinders[1]
    p0 = dec.point_at(1, ward4.ctx.rational(Fraction(1, 3)), ward4.ctx.zero)
    assert phi.apply(p0) == p0
    # half-height point returns after exactly 2 twists
    p = dec.point_at(1, ward4.ctx.rational(Fraction(1, 7)), cyl.height * Fraction(1, 2))
    q = phi.apply(p)
    assert q != p
    assert phi.apply(q) == p


def test_square_center_maps_to_octagon_center(ward4):
    dec = horizontal(4)
    phi = twist_map(dec)
    sq = ward4.polygons[2].centroid
    p = ward4.locate(2, sq[0], sq[1])
    assert phi.apply(p) == ward4.locate(0, 0, 0)


def test_twist_derivative_by_finite_differences(ward5):
    dec = horizontal(5)
    phi = twist_map(dec)
    cyl = dec.cylinders[0]
    x0 = ward5.ctx.rational(Fraction(1, 5))
    h1 = cyl.height * Fraction(1, 3)
    h2 = cyl.height * Fraction(2, 3)
    p1 = dec.point_at(0, x0, h1)
    p2 = dec.point_at(0, x0, h2)
    c1, nh1, nx1 = dec.coords(phi.apply(p1))
    c2, nh2, nx2 = dec.coords(phi.apply(p2))
    assert c1 == c2 == 0
    assert nh1 == h1 and nh2 == h2
    # horizontal displacement difference = shear * (h2 - h1) mod width
    diff = (nx2 - nx1) - (x0 - x0) - phi.shear * (h2 - h1)
    r = diff / cyl.width
    assert r.is_rational() and r.as_rational().denominator == 1


@settings(max_examples=25, deadline=None)
@given(
    st.integers(min_value=1, max_value=11),
    st.integers(min_value=2, max_value=12),
    st.integers(min_value=0, max_value=3),
)
def test_twist_orbit_order_matches_height_denominator(a, d, ci):
    import math

    if math.gcd(a, d) != 1 or a >= d:
        a = 1
    dec = horizontal(5)
    ci = ci % len(dec.cylinders)
    cyl = dec.cylinders[ci]
    phi = twist_map(dec)
    p = dec.point_at(ci, dec.surface.ctx.rational(Fraction(2, 7)), cyl.height * Fraction(a, d))
    q = p
    for i in range(1, d + 1):
        q = phi.apply(q)
        if q == p:
            assert i == d
            break
    else:
        pytest.fail("twist orbit did not close at the predicted order")


def test_rotation_order_and_fixed_center(ward5):
    psi = rotation_map(ward5)
    assert psi.order == 10
    origin = ward5.locate(0, 0, 0)
    assert psi.apply(origin) == origin
    rng = random.Random(3)
    for _ in range(20):
        p = random_interior_point(ward5, rng)
        q = p
        for _ in range(10):
            q = psi.apply(q)
        assert q == p


def test_rotation_swaps_pentagon_centers(ward5):
    psi = rotation_map(ward5)
    c1 = ward5.locate(1, *ward5.polygons[1].centroid)
    c2 = ward5.locate(2, *ward5.polygons[2].centroid)
    assert psi.apply(c1) == c2
    assert psi.apply(c2) == c1


def test_rotation_conjugates_decompositions():
    for n in (4, 6):
        a = horizontal(n).geometry_multiset()
        b = rotated(n, 1).geometry_multiset()
        for (w1, h1), (w2, h2) in zip(a, b):
            assert w1 == w2 and h1 == h2


def test_maps_preserve_singular_set(ward6):
    psi = rotation_map(ward6)
    phi = twist_map(horizontal(6))
    sing = {ward6.vertex_point(c) for c, _ in ward6.singularities()}
    assert {psi.apply(p) for p in sing} == sing
    assert {phi.apply(p) for p in sing} == sing


def test_orbit_of_octagon_center(ward4):
    dec = horizontal(4)
    phi = twist_map(dec)
    psi = rotation_map(ward4)
    verdict = orbit(ward4.locate(0, 0, 0), [phi, psi], cap=100, check_decomps=(dec,))
    assert verdict.is_finite()
    centers = {
        ward4.locate(pid, *ward4.polygons[pid].centroid) for pid in range(3)
    }
    assert verdict.points == frozenset(centers)


def test_orbit_irrational_point_is_infinite(ward4):
    ctx = ward4.ctx
    dec = horizontal(4)
    phi = twist_map(dec)
    psi = rotation_map(ward4)
    quarter = ctx.cos_pi(1, 4) * Fraction(1, 2)  # sqrt2/4
    p = ward4.locate(0, quarter, quarter)
    verdict = orbit(p, [phi, psi], cap=100,
                    check_decomps=(dec, rotated(4, 1)))
    assert verdict.is_infinite()
    maps = {
        "phi": phi, "phi^-1": phi.inverse(),
        "psi": psi, "psi^-1": psi.inverse(),
    }
    assert verify_witness(p, verdict.witness, maps, (dec, rotated(4, 1)))


def test_orbit_of_singular_vertex_is_finite(ward6):
    phi = twist_map(horizontal(6))
    psi = rotation_map(ward6)
    v = ward6.vertex_point(ward6.singularities()[0][0])
    verdict = orbit(v, [phi, psi], cap=100)
    assert verdict.is_finite()
    assert all(q.is_vertex() for q in verdict.points)


def test_orbit_stable_under_generator_order(ward4):
    dec = horizontal(4)
    phi = twist_map(dec)
    psi = rotation_map(ward4)
    p = ward4.locate(0, Fraction(1, 4), Fraction(1, 4))
    v1 = orbit(p, [phi, psi], cap=500, check_decomps=(dec, rotated(4, 1)))
    v2 = orbit(p, [psi, phi], cap=500, check_decomps=(dec, rotated(4, 1)))
    v3 = orbit(p, [phi.inverse(), psi.inverse()], cap=500,
               check_decomps=(dec, rotated(4, 1)))
    assert v1.status == v2.status == v3.status


def test_orbit_inconclusive_at_tiny_cap(ward4):
    dec = horizontal(4)
    phi = twist_map(dec)
    psi = rotation_map(ward4)
    verdict = orbit(ward4.locate(0, 0, 0), [phi, psi], cap=1)
    assert verdict.status == "inconclusive"


def test_rotation_requires_ward_surface(torus):
    with pytest.raises(Exception):
        RotationMap(torus)


def test_rotation_power_table_consistency(ward6):
    psi = rotation_map(ward6)
    psi3 = rotation_map(ward6, power=3)
    rng = random.Random(5)
    for _ in range(5):
        p = random_interior_point(ward6, rng)
        q = psi.apply(psi.apply(psi.apply(p)))
        assert q == psi3.apply(p)
