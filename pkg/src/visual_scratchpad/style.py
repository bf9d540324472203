from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .core import ParameterError
from .raster import BLACK, BLUE, RED, WHITE


@dataclass(frozen=True)
class Style:
    """Drawing constants shared by the task renderers (pixels at 448x448)."""

    node_radius: float = 6.0
    edge_width: float = 3.0
    wall_width: float = 2.0
    maze_margin: float = 10.0
    flatten_tolerance: float = 0.25
    background: tuple = WHITE
    stroke: tuple = BLACK
    scratch: tuple = BLUE
    sink: tuple = RED

    def __post_init__(self):
        if not self.edge_width > 0 or not self.wall_width > 0:
            raise ParameterError("stroke widths must be positive")
        if self.node_radius < 0 or self.maze_margin < 0:
            raise ParameterError("radii and margins must be non-negative")
        if not self.flatten_tolerance > 0:
            raise ParameterError("flatten tolerance must be positive")
        for name in ("background", "stroke", "scratch", "sink"):
            c = tuple(int(v) for v in getattr(self, name))
            if len(c) != 3 or not all(0 <= v <= 255 for v in c):
                raise ParameterError(f"{name} must be an RGB triple in [0, 255]")
            object.__setattr__(self, name, c)


DEFAULT_STYLE = Style()


def make_style(overrides: dict | None = None) -> Style:
    if not overrides:
        return DEFAULT_STYLE
    known = {f.name for f in fields(Style)}
    unknown = set(overrides) - known
    if unknown:
        raise ParameterError(f"unknown style keys: {sorted(unknown)}")
    return replace(DEFAULT_STYLE, **overrides)
