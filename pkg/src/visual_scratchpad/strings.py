"""Strings task: invisible anchors joined by C1-continuous cubic Bezier chains."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .core import FrameSequence, ParameterError, adjacency_lists, bfs_distances, hop_ball_schedule
from .cycles import (DEFAULT_EPSILON, DEFAULT_IMAGE_SIZE, circle_points, loops_to_edges,
                     rightmost_index, sample_cycle_loops, sample_node_angles)
from .geometry import Point
from .raster import Canvas, draw_cubic_bezier, draw_disc
from .style import DEFAULT_STYLE, Style

DEFAULT_RADIUS = 200.0
DEFAULT_ALPHA = 0.25


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    c1: Point
    c2: Point


@dataclass(frozen=True)
class StringCurve:
    n_half: int
    anchors: tuple[Point, ...]
    loops: tuple[tuple[int, ...], ...]
    segments: tuple[Segment, ...]
    label: int
    rightmost: int
    image_size: int = DEFAULT_IMAGE_SIZE
    radius: float = DEFAULT_RADIUS
    alpha: float = DEFAULT_ALPHA

    kind: ClassVar[str] = "strings"

    @property
    def num_nodes(self) -> int:
        return 2 * self.n_half

    def adjacency(self) -> list[list[int]]:
        return adjacency_lists(self.num_nodes, loops_to_edges(self.loops))


def compute_control_points(loop, alpha: float = DEFAULT_ALPHA) -> list[tuple[Point, Point]]:
    """Control points for each segment loop[i] -> loop[i+1] of a closed chain.

    With neighbours A' -> A -> B -> B' along the loop,
    c1 = A + alpha (B - A') and c2 = B - alpha (B' - A).  The outgoing
    tangent 3 (c1 - A) at every anchor then equals the incoming 3 (A - c2).
    """
    m = len(loop)
    if m < 3:
        raise ParameterError("a closed chain needs at least 3 anchors")
    out = []
    for i in range(m):
        ap, a, b, bp = loop[i - 1], loop[i], loop[(i + 1) % m], loop[(i + 2) % m]
        c1 = Point(a[0] + alpha * (b[0] - ap[0]), a[1] + alpha * (b[1] - ap[1]))
        c2 = Point(b[0] - alpha * (bp[0] - a[0]), b[1] - alpha * (bp[1] - a[1]))
        out.append((c1, c2))
    return out


def build_segments(anchors, loops, alpha: float) -> tuple[Segment, ...]:
    segments = []
    for loop in loops:
        controls = compute_control_points([anchors[i] for i in loop], alpha)
        for i, (c1, c2) in enumerate(controls):
            segments.append(Segment(loop[i], loop[(i + 1) % len(loop)], c1, c2))
    return tuple(segments)


def sample_strings_instance(n_half: int, label: int, rng: np.random.Generator,
                            image_size: int = DEFAULT_IMAGE_SIZE,
                            radius: float = DEFAULT_RADIUS,
                            alpha: float = DEFAULT_ALPHA,
                            epsilon: float = DEFAULT_EPSILON) -> StringCurve:
    if n_half < 3:
        raise ParameterError("n_half must be at least 3")
    angles = sample_node_angles(2 * n_half, epsilon, rng)
    anchors = circle_points(angles, image_size / 2, radius)
    loops = tuple(tuple(loop) for loop in sample_cycle_loops(n_half, label, rng))
    return StringCurve(n_half, anchors, loops, build_segments(anchors, loops, alpha),
                       label, rightmost_index(anchors), image_size, radius, alpha)


def continuity_report(curve: StringCurve) -> float:
    """Largest tangent jump |3(c1 - A) - 3(A - c2_prev)| over all anchors."""
    worst = 0.0
    start = 0
    for loop in curve.loops:
        segs = curve.segments[start:start + len(loop)]
        start += len(loop)
        for i, seg in enumerate(segs):
            prev = segs[i - 1]
            a = curve.anchors[seg.start]
            out_t = (3 * (seg.c1[0] - a[0]), 3 * (seg.c1[1] - a[1]))
            in_t = (3 * (a[0] - prev.c2[0]), 3 * (a[1] - prev.c2[1]))
            worst = max(worst, math.hypot(out_t[0] - in_t[0], out_t[1] - in_t[1]))
    return worst


def strings_label(curve: StringCurve) -> int:
    return int(len(bfs_distances(curve.adjacency(), 0)) == curve.num_nodes)


def strings_frame_schedule(curve: StringCurve) -> FrameSequence:
    return hop_ball_schedule(bfs_distances(curve.adjacency(), curve.rightmost))


def render_strings_frame(curve: StringCurve, colored=frozenset(),
                         style: Style = DEFAULT_STYLE) -> Canvas:
    """Black strings; segments with both anchors in ``colored`` redrawn blue.

    Anchors stay invisible except the rightmost one, which gets a blue marker
    in every scratchpad frame.
    """
    canvas = Canvas.blank(curve.image_size, color=style.background)
    pts = curve.anchors
    tol = style.flatten_tolerance
    for s in curve.segments:
        draw_cubic_bezier(canvas, pts[s.start], s.c1, s.c2, pts[s.end],
                          style.edge_width, style.stroke, tol)
    if colored:
        for s in curve.segments:
            if s.start in colored and s.end in colored:
                draw_cubic_bezier(canvas, pts[s.start], s.c1, s.c2, pts[s.end],
                                  style.edge_width, style.scratch, tol)
        draw_disc(canvas, pts[curve.rightmost], style.node_radius, style.scratch)
    return canvas


def render_strings_input(curve: StringCurve, style: Style = DEFAULT_STYLE) -> Canvas:
    return render_strings_frame(curve, frozenset(), style)
