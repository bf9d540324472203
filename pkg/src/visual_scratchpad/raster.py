"""RGB canvases and hard-edged drawing primitives.

Pixel ``(x, y)`` is the lattice point with those integer coordinates; a
primitive covers a pixel when that point lies inside the shape.  There is no
antialiasing, so every render is bit-exact.  Everything clips silently.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .core import ParameterError
from .geometry import flatten_cubic_bezier

WHITE = (255, 255, 255)
BLACK = (0, 0, 0)
BLUE = (0, 0, 255)
RED = (255, 0, 0)
GRAY = (128, 128, 128)

DEFAULT_SIZE = 448
PNG_COMPRESS_LEVEL = 6


@dataclass(eq=False)
class Canvas:
    """Row-major RGB raster, ``pixels[y, x] = (r, g, b)``."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ParameterError(f"expected an (H, W, 3) array, got {px.shape}")
        self.pixels = np.ascontiguousarray(px, dtype=np.uint8)

    @classmethod
    def blank(cls, width: int = DEFAULT_SIZE, height: int | None = None,
              color=WHITE) -> "Canvas":
        height = width if height is None else height
        px = np.empty((height, width, 3), dtype=np.uint8)
        px[...] = color
        return cls(px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def copy(self) -> "Canvas":
        return Canvas(self.pixels.copy())

    def count(self, color) -> int:
        return int(np.all(self.pixels == np.asarray(color, np.uint8), axis=2).sum())

    def mask(self, color) -> np.ndarray:
        return np.all(self.pixels == np.asarray(color, np.uint8), axis=2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Canvas):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(
            self.pixels, other.pixels)


def _window(canvas, xmin, xmax, ymin, ymax):
    """Clipped integer bounding box, or None when it misses the canvas."""
    if not all(math.isfinite(v) for v in (xmin, xmax, ymin, ymax)):
        return None
    x0 = max(0, math.floor(xmin))
    x1 = min(canvas.width - 1, math.ceil(xmax))
    y0 = max(0, math.floor(ymin))
    y1 = min(canvas.height - 1, math.ceil(ymax))
    if x0 > x1 or y0 > y1:
        return None
    return x0, x1, y0, y1


def _grid(x0, x1, y0, y1):
    ys = np.arange(y0, y1 + 1, dtype=np.float64)[:, None]
    xs = np.arange(x0, x1 + 1, dtype=np.float64)[None, :]
    return xs, ys


def draw_disc(canvas: Canvas, center, radius: float, color) -> Canvas:
    if radius < 0:
        raise ParameterError("radius must be non-negative")
    cx, cy = float(center[0]), float(center[1])
    win = _window(canvas, cx - radius, cx + radius, cy - radius, cy + radius)
    if win is None:
        return canvas
    x0, x1, y0, y1 = win
    xs, ys = _grid(*win)
    mask = (xs - cx) ** 2 + (ys - cy) ** 2 <= radius * radius
    canvas.pixels[y0:y1 + 1, x0:x1 + 1][mask] = color
    return canvas


def segment_mask(xs, ys, a, b, half_width: float) -> np.ndarray:
    ax, ay, bx, by = float(a[0]), float(a[1]), float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        d2 = (xs - ax) ** 2 + (ys - ay) ** 2
    else:
        t = np.clip(((xs - ax) * dx + (ys - ay) * dy) / l2, 0.0, 1.0)
        d2 = (xs - (ax + t * dx)) ** 2 + (ys - (ay + t * dy)) ** 2
    return d2 <= half_width * half_width


def draw_segment(canvas: Canvas, a, b, width: float, color) -> Canvas:
    """Cover every pixel within ``width / 2`` of the closed segment ab."""
    if not width > 0:
        raise ParameterError("segment width must be positive")
    hw = width / 2.0
    win = _window(canvas, min(a[0], b[0]) - hw, max(a[0], b[0]) + hw,
                  min(a[1], b[1]) - hw, max(a[1], b[1]) + hw)
    if win is None:
        return canvas
    x0, x1, y0, y1 = win
    xs, ys = _grid(*win)
    mask = segment_mask(xs, ys, a, b, hw)
    canvas.pixels[y0:y1 + 1, x0:x1 + 1][mask] = color
    return canvas


def draw_polyline(canvas: Canvas, points, width: float, color) -> Canvas:
    if len(points) == 1:
        return draw_segment(canvas, points[0], points[0], width, color)
    for a, b in zip(points, points[1:]):
        draw_segment(canvas, a, b, width, color)
    return canvas


def draw_cubic_bezier(canvas: Canvas, p0, c1, c2, p3, width: float, color,
                      tolerance: float = 0.25) -> Canvas:
    if not width > 0:
        raise ParameterError("curve width must be positive")
    return draw_polyline(canvas, flatten_cubic_bezier(p0, c1, c2, p3, tolerance),
                         width, color)


TWO_PI = 2.0 * math.pi


def _arc_bbox(cx, cy, r_outer, a0, span):
    """Bounding box of an annular sector (outer radius bounds everything)."""
    if span >= TWO_PI:
        return cx - r_outer, cx + r_outer, cy - r_outer, cy + r_outer
    angles = [a0, a0 + span]
    first = math.ceil(a0 / (math.pi / 2))
    k = first
    while k * math.pi / 2 <= a0 + span:
        angles.append(k * math.pi / 2)
        k += 1
    xs = [cx] + [cx + r_outer * math.cos(a) for a in angles]
    ys = [cy] + [cy + r_outer * math.sin(a) for a in angles]
    return min(xs), max(xs), min(ys), max(ys)


def annulus_arc_mask(xs, ys, center, r_inner, r_outer, angle0, angle1):
    """Pixels with r_inner <= rho < r_outer and angle in [angle0, angle1).

    Angles follow ``atan2(y - cy, x - cx)``, i.e. clockwise on screen since
    the y axis points down.
    """
    cx, cy = float(center[0]), float(center[1])
    span = angle1 - angle0
    rho2 = (xs - cx) ** 2 + (ys - cy) ** 2
    mask = (rho2 >= r_inner * r_inner) & (rho2 < r_outer * r_outer)
    if span < TWO_PI:
        theta = np.arctan2(ys - cy, xs - cx)
        rel = np.mod(theta - angle0, TWO_PI)
        mask &= rel < span
    return mask


def draw_annulus_arc(canvas: Canvas, center, r_inner: float, r_outer: float,
                     angle0: float, angle1: float, color) -> Canvas:
    if not 0 <= r_inner <= r_outer:
        raise ParameterError("need 0 <= r_inner <= r_outer")
    span = angle1 - angle0
    if span <= 0 or r_inner == r_outer:
        return canvas
    cx, cy = float(center[0]), float(center[1])
    win = _window(canvas, *_arc_bbox(cx, cy, r_outer, angle0, span))
    if win is None:
        return canvas
    x0, x1, y0, y1 = win
    xs, ys = _grid(*win)
    mask = annulus_arc_mask(xs, ys, center, r_inner, r_outer, angle0, angle1)
    canvas.pixels[y0:y1 + 1, x0:x1 + 1][mask] = color
    return canvas


def draw_radial_wall(canvas: Canvas, center, r_inner: float, r_outer: float,
                     angle: float, width: float, color) -> Canvas:
    if not 0 <= r_inner <= r_outer:
        raise ParameterError("need 0 <= r_inner <= r_outer")
    c, s = math.cos(angle), math.sin(angle)
    a = (center[0] + r_inner * c, center[1] + r_inner * s)
    b = (center[0] + r_outer * c, center[1] + r_outer * s)
    return draw_segment(canvas, a, b, width, color)


def _round_half_up_div(num: np.ndarray, den: int) -> np.ndarray:
    return (2 * num + den) // (2 * den)


def _area_weights(src: int, dst: int) -> np.ndarray:
    """(dst, src) matrix of source-pixel overlap fractions per output pixel."""
    w = np.zeros((dst, src))
    scale = src / dst
    for i in range(dst):
        lo, hi = i * scale, (i + 1) * scale
        j0, j1 = math.floor(lo), min(src, math.ceil(hi))
        for j in range(j0, j1):
            w[i, j] = min(hi, j + 1) - max(lo, j)
        w[i] /= scale
    return w


def downscale(canvas: Canvas, target_w: int, target_h: int) -> Canvas:
    """Box-filter resize with round-half-up on each averaged channel."""
    if target_w <= 0 or target_h <= 0:
        raise ParameterError("target dimensions must be positive")
    h, w = canvas.height, canvas.width
    if (target_w, target_h) == (w, h):
        return canvas.copy()
    if w % target_w == 0 and h % target_h == 0:
        fx, fy = w // target_w, h // target_h
        blocks = canvas.pixels.reshape(target_h, fy, target_w, fx, 3)
        sums = blocks.sum(axis=(1, 3), dtype=np.int64)
        return Canvas(_round_half_up_div(sums, fx * fy).astype(np.uint8))
    wy = _area_weights(h, target_h)
    wx = _area_weights(w, target_w)
    px = canvas.pixels.astype(np.float64)
    rows = np.tensordot(wy, px, axes=(1, 0))                    # (th, w, 3)
    out = np.tensordot(rows, wx, axes=(1, 1)).transpose(0, 2, 1)  # (th, tw, 3)
    out = np.floor(out + 0.5 + 1e-9)
    return Canvas(np.clip(out, 0, 255).astype(np.uint8))


def encode_png(canvas: Canvas) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(canvas.pixels, mode="RGB").save(
        buf, format="PNG", compress_level=PNG_COMPRESS_LEVEL, optimize=False)
    return buf.getvalue()


def encode_ppm(canvas: Canvas) -> bytes:
    """ASCII (P3) pixmap, one image row per text line."""
    header = f"P3\n{canvas.width} {canvas.height}\n255\n"
    rows = canvas.pixels.reshape(canvas.height, -1)
    body = "".join(" ".join(map(str, row.tolist())) + "\n" for row in rows)
    return (header + body).encode("ascii")


def encode_image(canvas: Canvas, fmt: str = "png") -> bytes:
    if fmt == "png":
        return encode_png(canvas)
    if fmt == "ppm":
        return encode_ppm(canvas)
    raise ParameterError(f"unknown image format {fmt!r}")


def decode_image(data: bytes) -> Canvas:
    if data[:2] == b"P3":
        tokens = data.decode("ascii").split()
        w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
        if maxval != 255:
            raise ParameterError("only 8-bit pixmaps are supported")
        values = np.array(tokens[4:4 + w * h * 3], dtype=np.uint8)
        return Canvas(values.reshape(h, w, 3))
    with Image.open(io.BytesIO(data)) as im:
        return Canvas(np.asarray(im.convert("RGB")))


def save_image(canvas: Canvas, path, fmt: str = "png") -> None:
    with open(path, "wb") as fh:
        fh.write(encode_image(canvas, fmt))


def load_image(path) -> Canvas:
    with open(path, "rb") as fh:
        return decode_image(fh.read())
