"""Ground-truth scratchpad step function.

The step maps a frame to (next frame, label estimate, halt) using nothing
but the current frame, which is what an inductive model is trained to copy.
States carry the symbolic colored set; the raster is rendered on demand.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from .core import BudgetExceededError, ContractError, FrameSequence
from .maze import MazeInstance
from .raster import Canvas, encode_image
from .style import DEFAULT_STYLE, Style
from .tasks import TaskInstance, frame_schedule, render_frame

UNDECIDED = None
DEFAULT_MAX_STEPS = 64


@dataclass(frozen=True, eq=False)
class FrameState:
    task: TaskInstance
    step_index: int
    colored_set: frozenset[int] = frozenset()
    style: Style = field(default=DEFAULT_STYLE, repr=False)

    @cached_property
    def canvas(self) -> Canvas:
        return render_frame(self.task, self.colored_set, self.style)


@dataclass(frozen=True, eq=False)
class StepOutput:
    next: FrameState
    label_estimate: int
    halt: bool
    label_decided: bool = True


def _schedule(task) -> FrameSequence:
    # Schedules are pure functions of the instance; memoize on the instance.
    cache = task.__dict__.setdefault("_schedule_cache", {})
    if "s" not in cache:
        cache["s"] = frame_schedule(task)
    return cache["s"]


def initial_state(task: TaskInstance, style: Style = DEFAULT_STYLE) -> FrameState:
    return FrameState(task, 0, frozenset(), style)


def decode_label_from_frame(task: TaskInstance, colored) -> int | None:
    """Read the label off a colored set: 1, 0 or ``None`` when undecided.

    Cycles/strings: everything colored means one loop; exactly half colored
    and closed under adjacency means two.  Mazes: the end cell colored means
    connected; the whole start component colored without it means not.
    """
    colored = frozenset(colored)
    if not colored:
        return UNDECIDED
    adj = task.adjacency()
    closed = all(v in colored for u in colored for v in adj[u])
    if isinstance(task, MazeInstance):
        if task.end in colored:
            return 1
        return 0 if closed else UNDECIDED
    if len(colored) == task.num_nodes:
        return 1
    if len(colored) == task.n_half and closed:
        return 0
    return UNDECIDED


def oracle_step(state: FrameState) -> StepOutput:
    sched = _schedule(state.task)
    k = state.step_index
    if k < 0 or k > len(sched):
        raise ContractError(f"step index {k} outside 0..{len(sched)}")
    expected = frozenset() if k == 0 else sched[k - 1]
    if state.colored_set != expected:
        raise ContractError("colored set does not match the schedule at this step")
    nk = min(k + 1, len(sched))
    nxt = FrameState(state.task, nk, sched[nk - 1], state.style)
    halt = nk == len(sched)
    decoded = decode_label_from_frame(state.task, nxt.colored_set)
    if halt:
        decoded = state.task.label if decoded is UNDECIDED else decoded
        return StepOutput(nxt, decoded, True, True)
    if decoded is UNDECIDED:
        return StepOutput(nxt, 0, False, False)
    return StepOutput(nxt, decoded, False, True)


class RunResult(NamedTuple):
    frames: list[FrameState]
    label: int
    steps_taken: int


def run_to_halt(task: TaskInstance, max_steps: int = DEFAULT_MAX_STEPS,
                style: Style = DEFAULT_STYLE) -> RunResult:
    """Step from the raw input until halt; ``frames[0]`` is the input."""
    if max_steps < 1:
        raise ContractError("max_steps must be at least 1")
    state = initial_state(task, style)
    frames = [state]
    for _ in range(max_steps):
        out = oracle_step(state)
        state = out.next
        frames.append(state)
        if out.halt:
            return RunResult(frames, out.label_estimate, len(frames) - 1)
    raise BudgetExceededError(f"no halt within {max_steps} steps")


class TeacherForcingTuple(NamedTuple):
    source: bytes
    target: bytes
    y: int
    halt: bool
    self_rollout: bool = False


def export_teacher_forcing_tuples(task: TaskInstance, include_self_rollout: bool = False,
                                  style: Style = DEFAULT_STYLE,
                                  fmt: str = "png") -> list[TeacherForcingTuple]:
    """(f_i, f_{i+1}, y, [i+1 == T]) for i = 0..T-1.

    With ``include_self_rollout`` every tuple appears a second time flagged
    for the trainer, which mixes in its own predicted frames for those.
    """
    run = run_to_halt(task, style=style)
    images = [encode_image(s.canvas, fmt) for s in run.frames]
    T = run.steps_taken
    out = [TeacherForcingTuple(images[i], images[i + 1], task.label, i + 1 == T)
           for i in range(T)]
    if include_self_rollout:
        out += [t._replace(self_rollout=True) for t in out]
    return out


def write_teacher_forcing(task: TaskInstance, task_id: str, out_dir,
                          include_self_rollout: bool = False,
                          style: Style = DEFAULT_STYLE) -> str:
    """Write frames as ``{task_id}_f{i:03d}.png`` plus ``{task_id}_tf.jsonl``.

    Each index line references the source and target frame files.
    """
    os.makedirs(out_dir, exist_ok=True)
    tuples = export_teacher_forcing_tuples(task, include_self_rollout, style)
    T = len(tuples) // (2 if include_self_rollout else 1)
    names = [f"{task_id}_f{i:03d}.png" for i in range(T + 1)]
    for i in range(T):
        with open(os.path.join(out_dir, names[i]), "wb") as fh:
            fh.write(tuples[i].source)
    with open(os.path.join(out_dir, names[T]), "wb") as fh:
        fh.write(tuples[T - 1].target)
    index = os.path.join(out_dir, f"{task_id}_tf.jsonl")
    with open(index, "w", encoding="utf-8") as fh:
        for j, t in enumerate(tuples):
            i = j % T
            row = {"task_id": task_id, "step": i, "y": t.y, "halt": t.halt,
                   "source": names[i], "target": names[i + 1],
                   "self_rollout": t.self_rollout}
            fh.write(json.dumps(row) + "\n")
    return index
