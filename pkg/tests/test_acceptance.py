"""Acceptance suite: every criterion at its stated tolerance (exact unless a
runtime bound is part of the criterion), one printed pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from wardsurf.affine import RotationMap, TwistMap
from wardsurf.flows import CylinderDecomposition, Direction
from wardsurf.periodic import (
    evenly_distributed_check,
    leaf_coverage_fraction,
    recheck_elimination,
    search_periodic,
)
from wardsurf.surface import build_ward

from conftest import horizontal, rotated, ward


def _report(num: int, desc: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" -- {detail}" if detail else ""
    print(f"[acceptance] criterion {num} ({desc}): {status}{suffix}")
    assert ok, f"criterion {num} failed: {desc} {suffix}"


SEARCH_NS = (4, 5, 6, 7, 8, 9)
EXPECTED_COUNTS = {4: 4, 5: 2, 6: 6, 7: 2, 8: 4, 9: 4}
NGON_CENTER_NS = {4, 6, 8}


@pytest.fixture(scope="module")
def classifications():
    out = {}
    for n in SEARCH_NS:
        t0 = time.perf_counter()
        out[n] = search_periodic(ward(n), D=8, cap=10_000)
        print(f"  [search n={n}: {time.perf_counter() - t0:.1f}s]")
    return out


def test_criterion_1_moduli_formula():
    t0 = time.perf_counter()
    ok = True
    for n in range(3, 11):
        s = build_ward(n)
        ctx = s.ctx
        alpha = (2 * ctx.cos_pi(1, n) + 1) / ctx.sin_pi(1, n)
        dec = CylinderDecomposition(s, Direction.horizontal(ctx))
        ok = ok and all(c.modulus == alpha for c in dec.cylinders)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 10.0
    _report(1, "horizontal moduli = (2cos(pi/n)+1)/sin(pi/n), n=3..10",
            ok, f"{elapsed:.2f}s")


def test_criterion_2_n4_structure(ward4):
    ctx = ward4.ctx
    sqrt2 = 2 * ctx.cos_pi(1, 4)
    dh = horizontal(4)
    dv = CylinderDecomposition(ward4, Direction.vertical(ctx))
    ok = len(dh.cylinders) == 3 and len(dv.cylinders) == 3
    for cyl in list(dh.cylinders) + list(dv.cylinders):
        ok = ok and cyl.modulus == 2 + sqrt2
    ok = ok and ward4.genus == 3
    ok = ok and ward4.singularities() == [(0, 5)]  # cone angle 10*pi
    _report(2, "n=4: 3+3 cylinders of modulus 2+sqrt2, genus 3, one 10pi cone", ok)


def test_criterion_3_n5_structure(ward5):
    ctx = ward5.ctx
    dec = horizontal(5)
    scale = 2 * ctx.sin_pi(1, 10)
    s1 = ctx.sin_pi(1, 5)
    s2 = ctx.sin_pi(2, 5)
    rescaled = [c.height * scale for c in dec.cylinders]
    ok = len(dec.cylinders) == 4
    ok = ok and sum(1 for h in rescaled if h == s1) == 2
    ok = ok and sum(1 for h in rescaled if h == s2 - s1) == 2
    ok = ok and ward5.genus == 4
    _report(3, "n=5: 4 cylinders, heights {sin(pi/5) x2, sin(2pi/5)-sin(pi/5) x2}, genus 4", ok)


def test_criterion_4_periodic_point_counts(classifications):
    ok = True
    details = []
    for n in SEARCH_NS:
        cls = classifications[n]
        s = ward(n)
        count_ok = len(cls.survivors) == EXPECTED_COUNTS[n]
        clean = not cls.inconclusive
        pts = {sv.point for sv in cls.survivors}
        big_center = s.locate(0, *s.polygons[0].centroid)
        has_big = big_center in pts
        sings_ok = all(s.vertex_point(c) in pts for c, _ in s.singularities())
        ngon_centers = {
            s.locate(pid, *s.polygons[pid].centroid) for pid in (1, 2)
        }
        ngon_ok = (ngon_centers <= pts) == (n in NGON_CENTER_NS)
        if n not in NGON_CENTER_NS:
            ngon_ok = ngon_ok and not (ngon_centers & pts)
        good = count_ok and clean and has_big and sings_ok and ngon_ok
        ok = ok and good
        details.append(f"n={n}:{len(cls.survivors)}{'' if good else '!'}")
    _report(4, "periodic point counts at D=8, cap=10^4, no inconclusive",
            ok, " ".join(details))


def test_criterion_5_twist_orbit_suite():
    rng = random.Random(20260810)
    decs = [horizontal(n) for n in (4, 5, 6, 7)]
    phis = [TwistMap(d) for d in decs]
    ok = True
    for _ in range(200):
        i = rng.randrange(len(decs))
        dec, phi = decs[i], phis[i]
        ci = rng.randrange(len(dec.cylinders))
        cyl = dec.cylinders[ci]
        d = rng.randrange(2, 13)
        a = rng.randrange(1, d)
        while math.gcd(a, d) != 1:
            a = rng.randrange(1, d)
        x0 = cyl.width * Fraction(rng.randrange(0, 17), 17)
        p = dec.point_at(ci, x0, cyl.height * Fraction(a, d))
        pts = [p]
        q = phi.apply(p)
        steps = 1
        while q != p and steps <= d:
            pts.append(q)
            q = phi.apply(q)
            steps += 1
        ok = ok and steps == d
        ok = ok and evenly_distributed_check(dec, pts)
        if not ok:
            break
    _report(5, "200 random twist orbits: order d, gaps width/d", ok)


def test_criterion_6_witness_soundness(classifications):
    ok = True
    checked = 0
    for n in SEARCH_NS:
        s = ward(n)
        cls = classifications[n]
        dec_h = horizontal(n)
        dec_r1 = rotated(n, 1)
        dec_r2 = rotated(n, 2)
        phi = TwistMap(dec_h)
        psi = RotationMap(s)
        maps = {
            "phi": phi, "phi^-1": phi.inverse(),
            "psi": psi, "psi^-1": psi.inverse(),
        }
        sample = cls.eliminated[:: max(1, len(cls.eliminated) // 25)]
        for e in sample:
            ok = ok and recheck_elimination(e, s, (dec_h, dec_r1, dec_r2), maps)
            checked += 1
    _report(6, "eliminated-point witnesses re-verify independently",
            ok, f"{checked} witnesses")


def test_criterion_7_rotation_correctness():
    rng = random.Random(8102026)
    ok = True
    for n in SEARCH_NS:
        s = ward(n)
        psi = RotationMap(s)
        for _ in range(200):
            pid = rng.randrange(3)
            poly = s.polygons[pid]
            ws = [Fraction(rng.randrange(1, 6)) for _ in poly.vertices]
            total = sum(ws)
            x = y = None
            for w, (vx, vy) in zip(ws, poly.vertices):
                q = w / total
                x = vx * q if x is None else x + vx * q
                y = vy * q if y is None else y + vy * q
            p = s.locate(pid, x, y)
            q = p
            for _ in range(2 * n):
                q = psi.apply(q)
            if q != p:
                ok = False
                break
        a = horizontal(n).geometry_multiset()
        b = rotated(n, 1).geometry_multiset()
        ok = ok and len(a) == len(b)
        ok = ok and all(w1 == w2 and h1 == h2 for (w1, h1), (w2, h2) in zip(a, b))
        if not ok:
            break
    _report(7, "psi^(2n) = id on 200 random points, psi-congruent decompositions, n=4..9", ok)


def test_criterion_8_genus_and_singularity_formula():
    ok = True
    for n in (5, 7, 9, 11):
        s = ward(n)
        expected_genus = (3 * n - n - 3 - math.gcd(n, 3)) // 2 + 1
        ok = ok and s.genus == expected_genus
        ok = ok and len(s.singularities()) == (3 if n % 3 == 0 else 1)
    _report(8, "odd n genus (2n-3-gcd(n,3))/2+1 and singularity count", ok)


def test_criterion_9_coverage_bounds(ward8):
    ctx = ward8.ctx
    n = 8
    dec = horizontal(8)
    origin = ward8.locate(0, 0, 0)
    ci, h_mid, _x = dec.coords(origin)
    cyl = dec.cylinders[ci]
    ok = cyl.height == 1

    # locus L: the 2n-gon scaled about the origin so its half-width is
    # 3/(4 sin(pi/n))
    sin_n = ctx.sin_pi(1, n)
    cot_2n = ctx.cos_pi(1, 2 * n) / ctx.sin_pi(1, 2 * n)
    lam = 3 / (2 * sin_n * cot_2n)
    ok = ok and (lam - 1).sign() < 0
    big = ward8.polygons[0]
    region = [(0, [(vx * lam, vy * lam) for vx, vy in big.vertices])]

    half = Fraction(1, 2)
    # central band |y| <= 3/8: strictly more than half of the leaf is in L
    for y in (Fraction(0), Fraction(1, 4), Fraction(3, 8), Fraction(-3, 8)):
        frac = leaf_coverage_fraction(dec, ci, ctx.rational(y + half), region)
        ok = ok and (frac - half).sign() > 0
    # outer band 3/8 <= y < 1/2: at least (1/2)(5/7) of the leaf is in L
    bound = Fraction(5, 14)
    for y in (Fraction(3, 8), Fraction(13, 32), Fraction(7, 16), Fraction(15, 32)):
        frac = leaf_coverage_fraction(dec, ci, ctx.rational(y + half), region)
        ok = ok and (frac - bound).sign() >= 0
    _report(9, "n=8 locus-L leaf coverage: > 1/2 centrally, >= 5/14 on 3/8<=y<1/2", ok)
