"""Planar helpers over field elements, with interval fast paths.

Sign decisions first try machine-float enclosures (sound: endpoints are
widened by ulp bumps after every rounding), and fall back to exact field
arithmetic only when the enclosure straddles zero.
"""

from __future__ import annotations

import math

from wardsurf.exactfield import FieldElement

_INF = math.inf


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _dn(x: float) -> float:
    return math.nextafter(x, -_INF)


def iv_sub(a, b):
    return _dn(a[0] - b[1]), _up(a[1] - b[0])


def iv_mul(a, b):
    p0 = a[0] * b[0]
    p1 = a[0] * b[1]
    p2 = a[1] * b[0]
    p3 = a[1] * b[1]
    lo = min(p0, p1, p2, p3)
    hi = max(p0, p1, p2, p3)
    if math.isnan(lo) or math.isnan(hi):
        return -_INF, _INF
    return _dn(lo), _up(hi)


def cross(ax, ay, bx, by) -> FieldElement:
    """Exact 2D cross product ax*by - ay*bx."""
    return ax * by - ay * bx


def cross_sign(ax, ay, bx, by) -> int:
    """Sign of the cross product, interval fast path with exact fallback."""
    lo, hi = iv_sub(
        iv_mul(ax._ball_bounds(), by._ball_bounds()),
        iv_mul(ay._ball_bounds(), bx._ball_bounds()),
    )
    if lo > 0.0:
        return 1
    if hi < 0.0:
        return -1
    return (ax * by - ay * bx).sign()


def dot(ax, ay, bx, by) -> FieldElement:
    return ax * bx + ay * by
