"""Points and cubic Bezier curves."""

from __future__ import annotations

import math
from typing import NamedTuple

from .core import ContractError


class Point(NamedTuple):
    x: float
    y: float


def _check_t(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise ContractError(f"curve parameter t={t} outside [0, 1]")


def eval_cubic_bezier(p0, c1, c2, p3, t: float) -> Point:
    _check_t(t)
    if t == 0.0:
        return Point(float(p0[0]), float(p0[1]))
    if t == 1.0:
        return Point(float(p3[0]), float(p3[1]))
    s = 1.0 - t
    b0, b1, b2, b3 = s * s * s, 3 * s * s * t, 3 * s * t * t, t * t * t
    return Point(
        b0 * p0[0] + b1 * c1[0] + b2 * c2[0] + b3 * p3[0],
        b0 * p0[1] + b1 * c1[1] + b2 * c2[1] + b3 * p3[1],
    )


def bezier_derivative(p0, c1, c2, p3, t: float) -> Point:
    _check_t(t)
    s = 1.0 - t
    a, b, c = 3 * s * s, 6 * s * t, 3 * t * t
    return Point(
        a * (c1[0] - p0[0]) + b * (c2[0] - c1[0]) + c * (p3[0] - c2[0]),
        a * (c1[1] - p0[1]) + b * (c2[1] - c1[1]) + c * (p3[1] - c2[1]),
    )


def point_segment_distance(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / l2
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy))


def flatten_cubic_bezier(p0, c1, c2, p3, tolerance: float = 0.25,
                         max_depth: int = 16) -> list[Point]:
    """Polyline through the curve with chord deviation at most ``tolerance``.

    A piece is accepted once both of its inner control points lie within
    ``tolerance`` of the chord; by the convex hull property the curve piece
    then does too.  Otherwise it is split at t=1/2 (de Casteljau).
    """
    out = [Point(float(p0[0]), float(p0[1]))]

    def rec(a, b, c, d, depth):
        if depth >= max_depth or (
            point_segment_distance(b, a, d) <= tolerance
            and point_segment_distance(c, a, d) <= tolerance
        ):
            out.append(Point(float(d[0]), float(d[1])))
            return
        ab = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        bc = ((b[0] + c[0]) / 2, (b[1] + c[1]) / 2)
        cd = ((c[0] + d[0]) / 2, (c[1] + d[1]) / 2)
        abc = ((ab[0] + bc[0]) / 2, (ab[1] + bc[1]) / 2)
        bcd = ((bc[0] + cd[0]) / 2, (bc[1] + cd[1]) / 2)
        mid = ((abc[0] + bcd[0]) / 2, (abc[1] + bcd[1]) / 2)
        rec(a, ab, abc, mid, depth + 1)
        rec(mid, bcd, cd, d, depth + 1)

    rec(p0, c1, c2, p3, 0)
    return out
