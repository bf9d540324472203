"""Cycles task: 2n visible nodes joined into one 2n-cycle or two n-cycles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .core import FrameSequence, ParameterError, adjacency_lists, bfs_distances, hop_ball_schedule
from .geometry import Point
from .raster import Canvas, draw_disc, draw_segment
from .style import DEFAULT_STYLE, Style

DEFAULT_IMAGE_SIZE = 448
DEFAULT_RADIUS = 220.0
DEFAULT_EPSILON = 0.2


@dataclass(frozen=True)
class CycleGraph:
    n_half: int
    positions: tuple[Point, ...]
    edges: tuple[tuple[int, int], ...]
    label: int
    rightmost: int
    image_size: int = DEFAULT_IMAGE_SIZE
    radius: float = DEFAULT_RADIUS

    kind: ClassVar[str] = "cycles"

    @property
    def num_nodes(self) -> int:
        return 2 * self.n_half

    def adjacency(self) -> list[list[int]]:
        return adjacency_lists(self.num_nodes, self.edges)


def sample_node_angles(count: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """Increasing angles whose circular gaps are all at least ``epsilon``.

    Draws ``count - 1`` uniforms on ``[0, 2*pi - count*epsilon]`` (sorted),
    then a rotation uniform on ``[0, 2*pi]``, and returns
    ``theta_1 = beta``, ``theta_{i+1} = beta + x_i + i*epsilon``.  The result
    is not reduced mod 2*pi.
    """
    if count < 1:
        raise ParameterError("need at least one angle")
    if epsilon < 0 or count * epsilon >= 2 * math.pi:
        raise ParameterError(f"cannot fit {count} angles {epsilon} rad apart")
    xs = np.sort(rng.uniform(0.0, 2 * math.pi - count * epsilon, count - 1))
    beta = rng.uniform(0.0, 2 * math.pi)
    offsets = np.concatenate([[0.0], xs + epsilon * np.arange(1, count)])
    return beta + offsets


def circular_gaps(angles) -> np.ndarray:
    a = np.sort(np.mod(np.asarray(angles, dtype=float), 2 * math.pi))
    return np.diff(np.concatenate([a, [a[0] + 2 * math.pi]]))


def sample_cycle_loops(n_half: int, label: int, rng: np.random.Generator) -> list[list[int]]:
    """Cyclic node orders: one loop of 2n (label 1) or two loops of n (label 0).

    A single uniform permutation of the 2n nodes supplies both the uniform
    split into halves and a uniform cyclic order within each loop.
    """
    if n_half < 3:
        raise ParameterError("n_half must be at least 3")
    if label not in (0, 1):
        raise ParameterError("label must be 0 or 1")
    perm = [int(v) for v in rng.permutation(2 * n_half)]
    if label == 1:
        return [perm]
    return [perm[:n_half], perm[n_half:]]


def loops_to_edges(loops) -> list[tuple[int, int]]:
    edges = []
    for loop in loops:
        m = len(loop)
        for i in range(m):
            a, b = loop[i], loop[(i + 1) % m]
            edges.append((min(a, b), max(a, b)))
    return edges


def sample_cycle_topology(n_half: int, label: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    return loops_to_edges(sample_cycle_loops(n_half, label, rng))


def rightmost_index(positions) -> int:
    # np.argmax returns the lowest index among ties.
    return int(np.argmax([p[0] for p in positions]))


def circle_points(angles, center: float, radius: float) -> tuple[Point, ...]:
    return tuple(Point(center + radius * math.cos(a), center + radius * math.sin(a))
                 for a in angles)


def make_cycles_instance(n_half: int, label: int, rng: np.random.Generator,
                         image_size: int = DEFAULT_IMAGE_SIZE,
                         radius: float = DEFAULT_RADIUS,
                         epsilon: float = DEFAULT_EPSILON) -> CycleGraph:
    if n_half < 3:
        raise ParameterError("n_half must be at least 3")
    if radius <= 0 or image_size <= 0:
        raise ParameterError("radius and image size must be positive")
    angles = sample_node_angles(2 * n_half, epsilon, rng)
    positions = circle_points(angles, image_size / 2, radius)
    edges = sample_cycle_topology(n_half, label, rng)
    return CycleGraph(n_half, positions, tuple(edges), label,
                      rightmost_index(positions), image_size, radius)


def cycles_label(graph: CycleGraph) -> int:
    reached = bfs_distances(graph.adjacency(), 0)
    return int(len(reached) == graph.num_nodes)


def cycles_frame_schedule(graph: CycleGraph) -> FrameSequence:
    return hop_ball_schedule(bfs_distances(graph.adjacency(), graph.rightmost))


def render_cycles_frame(graph: CycleGraph, colored=frozenset(),
                        style: Style = DEFAULT_STYLE) -> Canvas:
    """Input drawing with the nodes in ``colored`` (and edges between them) in blue."""
    canvas = Canvas.blank(graph.image_size, color=style.background)
    pos = graph.positions
    for a, b in graph.edges:
        draw_segment(canvas, pos[a], pos[b], style.edge_width, style.stroke)
    for p in pos:
        draw_disc(canvas, p, style.node_radius, style.stroke)
    for a, b in graph.edges:
        if a in colored and b in colored:
            draw_segment(canvas, pos[a], pos[b], style.edge_width, style.scratch)
    for i in sorted(colored):
        draw_disc(canvas, pos[i], style.node_radius, style.scratch)
    return canvas


def render_cycles_input(graph: CycleGraph, style: Style = DEFAULT_STYLE) -> Canvas:
    return render_cycles_frame(graph, frozenset(), style)
