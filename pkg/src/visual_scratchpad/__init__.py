"""Generators, ground-truth scratchpads and probes for global visual reasoning tasks."""

from .core import BudgetExceededError, ContractError, FrameSequence, ParameterError
from .cycles import CycleGraph, make_cycles_instance
from .dataset import ManifestRecord, ScoreReport, TaskConfig, generate_dataset, score_predictions
from .maze import MazeInstance, make_maze_instance
from .oracle import FrameState, StepOutput, oracle_step, run_to_halt
from .raster import Canvas
from .strings import StringCurve, sample_strings_instance
from .style import Style
from .tasks import TASKS, frame_schedule, make_instance, render_frame, render_input

__version__ = "0.1.0"
