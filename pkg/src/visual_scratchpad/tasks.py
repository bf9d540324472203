"""Uniform access to the four tasks by name.

Sizes follow the benchmark naming: ``cycles 24`` and ``strings 20`` count
all 2n nodes/anchors, ``maze-rect 32`` is a 32x32 grid and ``maze-circ 16``
has 16 rings around the center cell.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from . import cycles, maze, strings
from .core import FrameSequence, ParameterError
from .raster import Canvas
from .style import DEFAULT_STYLE, Style

TaskInstance = Union[cycles.CycleGraph, strings.StringCurve, maze.MazeInstance]

TASKS = ("cycles", "strings", "maze-rect", "maze-circ")
DEFAULT_SIZES = {"cycles": 24, "strings": 20, "maze-rect": 32, "maze-circ": 16}


def check_task(task: str) -> None:
    if task not in TASKS:
        raise ParameterError(f"unknown task {task!r}; expected one of {TASKS}")


def size_params(task: str, size: int) -> dict:
    check_task(task)
    if task in ("cycles", "strings"):
        if size % 2 or size < 6:
            raise ParameterError(f"{task} size counts all 2n nodes; got {size}")
        return {"size": size, "n_half": size // 2}
    return {"size": size}


def make_instance(task: str, size: int, label: int, rng: np.random.Generator,
                  regime: str = "main", image_size: int = 448) -> TaskInstance:
    params = size_params(task, size)
    if task == "cycles":
        return cycles.make_cycles_instance(params["n_half"], label, rng, image_size=image_size)
    if task == "strings":
        return strings.sample_strings_instance(params["n_half"], label, rng,
                                               image_size=image_size)
    kind = "rect" if task == "maze-rect" else "circular"
    return maze.make_maze_instance(kind, size, label, rng, regime, image_size)


def task_name(inst: TaskInstance) -> str:
    if isinstance(inst, maze.MazeInstance):
        return "maze-rect" if inst.graph.kind == "rect" else "maze-circ"
    return inst.kind


def frame_schedule(inst: TaskInstance) -> FrameSequence:
    if isinstance(inst, cycles.CycleGraph):
        return cycles.cycles_frame_schedule(inst)
    if isinstance(inst, strings.StringCurve):
        return strings.strings_frame_schedule(inst)
    return maze.maze_frame_schedule(inst)


def render_frame(inst: TaskInstance, colored=frozenset(),
                 style: Style = DEFAULT_STYLE) -> Canvas:
    if isinstance(inst, cycles.CycleGraph):
        return cycles.render_cycles_frame(inst, colored, style)
    if isinstance(inst, strings.StringCurve):
        return strings.render_strings_frame(inst, colored, style)
    return maze.render_maze_frame(inst, colored, style)


def render_input(inst: TaskInstance, style: Style = DEFAULT_STYLE) -> Canvas:
    return render_frame(inst, frozenset(), style)


def recompute_label(inst: TaskInstance) -> int:
    """Label from the structure alone (connectivity), ignoring the stored one."""
    if isinstance(inst, cycles.CycleGraph):
        return cycles.cycles_label(inst)
    if isinstance(inst, strings.StringCurve):
        return strings.strings_label(inst)
    return maze.maze_label(inst)
