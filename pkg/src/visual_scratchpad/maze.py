"""Rectangular and circular mazes: Kruskal spanning tree, endpoints, split wall."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import ClassVar

import numpy as np

from .core import FrameSequence, ParameterError, adjacency_lists, bfs_distances
from .raster import Canvas, draw_annulus_arc, draw_radial_wall, draw_segment
from .style import DEFAULT_STYLE, Style

DEFAULT_IMAGE_SIZE = 448
FRAME_STEP = 10
MAIN_WINDOW = 20
EASY_MIN, EASY_MAX = 10, 30
REGIMES = ("main", "easy")


@dataclass(frozen=True)
class CellGraph:
    """Cells plus every candidate wall, each wall a pair of adjacent cells.

    Rectangular cell ``r * n + c`` sits at row r, column c.  Circular cell 0
    is the center; ring ``r`` occupies indices ``ring_offsets[r]`` onward with
    sector 0 starting at angle 0.
    """

    kind: str
    size: int
    n_cells: int
    walls: tuple[tuple[int, int], ...]
    ring_counts: tuple[int, ...] = ()

    @property
    def ring_offsets(self) -> tuple[int, ...]:
        return tuple(int(v) for v in np.concatenate([[0], np.cumsum(self.ring_counts)[:-1]]))

    def adjacency(self) -> list[list[int]]:
        return adjacency_lists(self.n_cells, self.walls)


def circular_ring_counts(rings: int) -> list[int]:
    """Cells per ring, center first: 1, 6, 12 x3, 24 x6, 48 x12, 96 x24, ..."""
    counts = [1]
    count, run = 6, 1
    while len(counts) <= rings:
        counts.extend([count] * min(run, rings + 1 - len(counts)))
        count *= 2
        run = 3 if run == 1 else 2 * run
    return counts


@lru_cache(maxsize=32)
def build_cell_graph(kind: str, size: int) -> CellGraph:
    if kind == "rect":
        if size < 4:
            raise ParameterError("rectangular mazes need at least 4 rows")
        walls = []
        for r in range(size):
            for c in range(size):
                i = r * size + c
                if c + 1 < size:
                    walls.append((i, i + 1))
                if r + 1 < size:
                    walls.append((i, i + size))
        return CellGraph("rect", size, size * size, tuple(walls))
    if kind == "circular":
        if size < 2:
            raise ParameterError("circular mazes need at least 2 rings")
        counts = circular_ring_counts(size)
        offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
        walls = [(0, 1 + j) for j in range(counts[1])]
        for r in range(1, size + 1):
            m, o = counts[r], int(offsets[r])
            for j in range(m):
                a, b = o + j, o + (j + 1) % m
                walls.append((min(a, b), max(a, b)))
            if r < size:
                m2, o2 = counts[r + 1], int(offsets[r + 1])
                for j in range(m):
                    if m2 == 2 * m:
                        walls.append((o + j, o2 + 2 * j))
                        walls.append((o + j, o2 + 2 * j + 1))
                    else:
                        walls.append((o + j, o2 + j))
        return CellGraph("circular", size, int(sum(counts)), tuple(walls), tuple(counts))
    raise ParameterError(f"unknown maze kind {kind!r}")


class _DisjointSet:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def kruskal_generate(graph: CellGraph, rng: np.random.Generator) -> tuple[frozenset[int], int]:
    """Remove walls in uniformly shuffled order whenever that joins two regions.

    Returns the wall indices that became passages (a spanning tree) and the
    first wall removed.
    """
    order = rng.permutation(len(graph.walls))
    ds = _DisjointSet(graph.n_cells)
    tree = []
    walls = graph.walls
    for w in order.tolist():
        a, b = walls[w]
        if ds.union(a, b):
            tree.append(w)
            if len(tree) == graph.n_cells - 1:
                break
    return frozenset(tree), tree[0]


def tree_adjacency(graph: CellGraph, passages) -> list[list[int]]:
    return adjacency_lists(graph.n_cells, (graph.walls[w] for w in passages))


def pick_start_end(graph: CellGraph, tree, first_wall: int, regime: str,
                   rng: np.random.Generator) -> tuple[int, int, int, int]:
    """Start next to the first removed wall, end at a sampled tree distance.

    Returns ``(start, end, d_target, d_max)``.
    """
    if regime not in REGIMES:
        raise ParameterError(f"unknown regime {regime!r}")
    start = graph.walls[first_wall][int(rng.integers(2))]
    dist = bfs_distances(tree_adjacency(graph, tree), start)
    d_max = max(dist.values())
    if regime == "main":
        if d_max < MAIN_WINDOW:
            raise ParameterError(f"maze too small for the main regime (d_max={d_max})")
        lo, hi = max(1, d_max - MAIN_WINDOW), d_max
    else:
        if d_max < EASY_MIN:
            raise ParameterError(f"maze too small for the easy regime (d_max={d_max})")
        lo, hi = EASY_MIN, min(EASY_MAX, d_max)
    d_target = int(rng.integers(lo, hi + 1))
    candidates = sorted(c for c, d in dist.items() if d == d_target)
    end = candidates[int(rng.integers(len(candidates)))]
    return start, end, d_target, d_max


def _rooted(graph: CellGraph, tree, root: int):
    """BFS order, parent cell, parent wall and subtree sizes of the rooted tree."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(graph.n_cells)]
    for w in tree:
        a, b = graph.walls[w]
        adj[a].append((b, w))
        adj[b].append((a, w))
    parent = [-1] * graph.n_cells
    parent_wall = [-1] * graph.n_cells
    order = [root]
    seen = [False] * graph.n_cells
    seen[root] = True
    for u in order:
        for v, w in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                parent_wall[v] = w
                order.append(v)
    sub = [1] * graph.n_cells
    for u in reversed(order[1:]):
        sub[parent[u]] += sub[u]
    return order, parent, parent_wall, sub


def split_components(graph: CellGraph, tree, start: int, end: int, label: int,
                     regime: str) -> int:
    """Choose the tree edge whose wall is re-inserted to make two components.

    Label 0 cuts the start-end path, label 1 cuts anywhere else.  The main
    regime balances the two component sizes; the easy regime aims the start
    side at ``(30 / d_max) * (cells / 2)``.  Ties go to the lowest wall index.
    """
    if regime not in REGIMES:
        raise ParameterError(f"unknown regime {regime!r}")
    order, parent, parent_wall, sub = _rooted(graph, tree, start)
    n = graph.n_cells
    path = set()
    v = end
    while v != start:
        path.add(parent_wall[v])
        v = parent[v]
    if regime == "easy":
        dist = bfs_distances(tree_adjacency(graph, tree), start)
        target = EASY_MAX / max(dist.values()) * (n / 2)
    best = None
    for child in order[1:]:
        w = parent_wall[child]
        if (w in path) != (label == 0):
            continue
        if regime == "main":
            score = abs(n - 2 * sub[child])
        else:
            score = abs((n - sub[child]) - target)
        key = (score, w)
        if best is None or key < best:
            best = key
    if best is None:
        raise ParameterError("no wall can split this maze as requested")
    return best[1]


@dataclass(frozen=True)
class MazeInstance:
    graph: CellGraph
    tree: frozenset[int]
    start: int
    end: int
    label: int
    split_wall: int
    d_target: int
    d_max: int
    regime: str = "main"
    image_size: int = DEFAULT_IMAGE_SIZE

    kind: ClassVar[str] = "maze"

    @property
    def passages(self) -> frozenset[int]:
        return self.tree - {self.split_wall}

    def adjacency(self) -> list[list[int]]:
        return tree_adjacency(self.graph, self.passages)

    @cached_property
    def _wall_masks(self) -> dict:
        return {}


def make_maze_instance(kind: str, size: int, label: int, rng: np.random.Generator,
                       regime: str = "main",
                       image_size: int = DEFAULT_IMAGE_SIZE) -> MazeInstance:
    """Draws, in order: wall shuffle, start side, target distance, end cell."""
    if label not in (0, 1):
        raise ParameterError("label must be 0 or 1")
    graph = build_cell_graph(kind, size)
    tree, first = kruskal_generate(graph, rng)
    start, end, d_target, d_max = pick_start_end(graph, tree, first, regime, rng)
    split = split_components(graph, tree, start, end, label, regime)
    return MazeInstance(graph, tree, start, end, label, split, d_target, d_max,
                        regime, image_size)


def maze_label(inst: MazeInstance) -> int:
    return int(inst.end in bfs_distances(inst.adjacency(), inst.start))


def maze_stop_distance(inst: MazeInstance) -> int:
    dist = bfs_distances(inst.adjacency(), inst.start)
    return dist[inst.end] if inst.end in dist else max(dist.values())


def maze_frame_schedule(inst: MazeInstance, step: int = FRAME_STEP) -> FrameSequence:
    """Frame k colors the start component within min(step * k, d_stop)."""
    if step < 1:
        raise ParameterError("frame step must be positive")
    dist = bfs_distances(inst.adjacency(), inst.start)
    d_stop = dist[inst.end] if inst.end in dist else max(dist.values())
    frames = max(1, math.ceil(d_stop / step))
    sets = []
    for k in range(1, frames + 1):
        radius = min(step * k, d_stop)
        sets.append(frozenset(c for c, d in dist.items() if d <= radius))
    return FrameSequence(tuple(sets))


# -- rendering -------------------------------------------------------------

def rect_wall_segments(graph: CellGraph, image_size: int, margin: float):
    """Segment endpoints of every candidate wall, plus the four outer sides."""
    n = graph.size
    cs = (image_size - 2 * margin) / n
    segs = []
    for a, b in graph.walls:
        r, c = divmod(a, n)
        if b == a + 1:
            x = margin + (c + 1) * cs
            segs.append(((x, margin + r * cs), (x, margin + (r + 1) * cs)))
        else:
            y = margin + (r + 1) * cs
            segs.append(((margin + c * cs, y), (margin + (c + 1) * cs, y)))
    lo, hi = margin, image_size - margin
    boundary = [((lo, lo), (hi, lo)), ((hi, lo), (hi, hi)),
                ((hi, hi), (lo, hi)), ((lo, hi), (lo, lo))]
    return segs, boundary


def _ring_width(graph: CellGraph, image_size: int, margin: float) -> float:
    # The center disc takes one band, so rings + 1 bands fill the radius.
    return (image_size / 2 - margin) / (graph.size + 1)


@lru_cache(maxsize=16)
def cell_map(graph: CellGraph, image_size: int, margin: float) -> np.ndarray:
    """Cell index under every pixel, -1 outside the maze."""
    ys, xs = np.mgrid[0:image_size, 0:image_size].astype(np.float64)
    if graph.kind == "rect":
        n = graph.size
        cs = (image_size - 2 * margin) / n
        col = np.floor((xs - margin) / cs).astype(np.int64)
        row = np.floor((ys - margin) / cs).astype(np.int64)
        inside = (col >= 0) & (col < n) & (row >= 0) & (row < n)
        out = np.where(inside, row * n + col, -1)
    else:
        dr = _ring_width(graph, image_size, margin)
        cx = cy = image_size / 2
        rho = np.hypot(xs - cx, ys - cy)
        ring = np.floor(rho / dr).astype(np.int64)
        theta = np.mod(np.arctan2(ys - cy, xs - cx), 2 * math.pi)
        counts = np.asarray(graph.ring_counts)
        offsets = np.asarray(graph.ring_offsets)
        inside = ring <= graph.size
        rc = np.clip(ring, 0, graph.size)
        m = counts[rc]
        sector = np.minimum((theta / (2 * math.pi) * m).astype(np.int64), m - 1)
        out = np.where(inside, offsets[rc] + sector, -1)
    out = out.astype(np.int32)
    out.setflags(write=False)
    return out


def _draw_circular_walls(canvas, graph: CellGraph, walls, image_size, margin,
                         width, color, outer=True):
    dr = _ring_width(graph, image_size, margin)
    center = (image_size / 2, image_size / 2)
    counts, offsets = graph.ring_counts, graph.ring_offsets

    def locate(cell):
        if cell == 0:
            return 0, 0
        r = int(np.searchsorted(offsets, cell, side="right")) - 1
        return r, cell - offsets[r]

    def arc(radius, a0, a1):
        pad = (width / 2) / radius
        draw_annulus_arc(canvas, center, radius - width / 2, radius + width / 2,
                         a0 - pad, a1 + pad, color)

    for a, b in walls:
        ra, ja = locate(a)
        rb, jb = locate(b)
        if ra == rb:
            m = counts[ra]
            j = ja if (ja + 1) % m == jb else jb
            draw_radial_wall(canvas, center, ra * dr, (ra + 1) * dr,
                             2 * math.pi * (j + 1) / m, width, color)
        else:
            m = counts[rb]
            arc(rb * dr, 2 * math.pi * jb / m, 2 * math.pi * (jb + 1) / m)
    if outer:
        r = (graph.size + 1) * dr
        draw_annulus_arc(canvas, center, r - width / 2, r + width / 2,
                         0.0, 2 * math.pi, color)


def wall_mask(inst: MazeInstance, style: Style = DEFAULT_STYLE) -> np.ndarray:
    """Pixels covered by closed walls and the outer boundary."""
    key = (inst.image_size, style.wall_width, style.maze_margin)
    cache = inst._wall_masks
    if key in cache:
        return cache[key]
    graph = inst.graph
    open_ = inst.passages
    closed = [graph.walls[w] for w in range(len(graph.walls)) if w not in open_]
    scratch = Canvas.blank(inst.image_size, color=(0, 0, 0))
    on = (255, 255, 255)
    if graph.kind == "rect":
        segs, boundary = rect_wall_segments(graph, inst.image_size, style.maze_margin)
        for w in range(len(graph.walls)):
            if w not in open_:
                draw_segment(scratch, *segs[w], style.wall_width, on)
        for seg in boundary:
            draw_segment(scratch, *seg, style.wall_width, on)
    else:
        _draw_circular_walls(scratch, graph, closed, inst.image_size,
                             style.maze_margin, style.wall_width, on)
    mask = scratch.pixels[:, :, 0] == 255
    mask.setflags(write=False)
    cache[key] = mask
    return mask


def render_maze_frame(inst: MazeInstance, colored=frozenset(),
                      style: Style = DEFAULT_STYLE) -> Canvas:
    """Explored cells blue, start blue, end red, walls on top."""
    canvas = Canvas.blank(inst.image_size, color=style.background)
    cmap = cell_map(inst.graph, inst.image_size, style.maze_margin)
    px = canvas.pixels
    if colored:
        lut = np.zeros(inst.graph.n_cells + 1, dtype=bool)
        lut[np.fromiter(colored, dtype=np.int64)] = True
        px[lut[cmap]] = style.scratch  # index -1 hits the spare False slot
    px[cmap == inst.start] = style.scratch
    px[cmap == inst.end] = style.sink
    px[wall_mask(inst, style)] = style.stroke
    return canvas


def render_maze_input(inst: MazeInstance, style: Style = DEFAULT_STYLE) -> Canvas:
    return render_maze_frame(inst, frozenset(), style)
