"""Batch generation, masked variants and scoring of external predictions.

Layout of a generated dataset directory::

    manifest.jsonl              one record per sample, sorted by id
    images/000042_input.png
    images/000042_f001.png ...  scratchpad frames (single mode: final only)

Sample ``i`` has label ``i % 2`` and is built from the rng keyed by
``stable_hash(seed, i)``, so it can be regenerated on its own.
"""

from __future__ import annotations

import json
import os
import shutil
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .core import ParameterError
from .globality import MASK_SIZE, patch_mask
from .maze import REGIMES, MazeInstance
from .raster import Canvas, downscale, encode_png, load_image
from .rng import make_rng, sample_seed, stable_hash
from .style import make_style
from .tasks import DEFAULT_SIZES, TASKS, frame_schedule, make_instance, render_frame, size_params

FRAME_MODES = ("none", "single", "multi")
RESOLUTIONS = (448, 224)
RENDER_SIZE = 448
MASK_STREAM = 0x4D41534B  # keeps mask draws apart from instance draws
MANIFEST = "manifest.jsonl"
IMAGES = "images"


@dataclass
class TaskConfig:
    task: str = "cycles"
    size: Optional[int] = None
    count: int = 100
    seed: int = 0
    regime: str = "main"
    frames: str = "multi"
    resolution: int = 448
    mask_prob: Optional[float] = None
    split: str = "train"
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.task not in TASKS:
            raise ParameterError(f"unknown task {self.task!r}")
        if self.size is None:
            self.size = DEFAULT_SIZES[self.task]
        size_params(self.task, self.size)
        if self.count < 0 or self.count % 2:
            raise ParameterError("count must be even so labels balance exactly")
        if self.regime not in REGIMES:
            raise ParameterError(f"unknown regime {self.regime!r}")
        if self.frames not in FRAME_MODES:
            raise ParameterError(f"frames must be one of {FRAME_MODES}")
        if self.resolution not in RESOLUTIONS:
            raise ParameterError(f"resolution must be one of {RESOLUTIONS}")
        if self.mask_prob is not None:
            if self.resolution != MASK_SIZE:
                raise ParameterError("patch masking needs resolution 224")
            if not 0.0 <= self.mask_prob <= 1.0:
                raise ParameterError("mask probability must lie in [0, 1]")
        make_style(self.style)

    def params(self) -> dict:
        out = size_params(self.task, self.size)
        out["resolution"] = self.resolution
        out["frames"] = self.frames
        if self.style:
            out["style"] = dict(sorted(self.style.items()))
        if self.mask_prob is not None:
            out["mask_prob"] = self.mask_prob
        return out


@dataclass
class ManifestRecord:
    id: int
    task: str
    label: int
    sample_seed: int
    params: dict
    input_path: str
    frame_paths: list
    num_frames: int
    d_target: Optional[int]
    d_max: Optional[int]
    split: str
    regime: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False)


def input_name(i: int) -> str:
    return f"{IMAGES}/{i:06d}_input.png"


def frame_name(i: int, k: int) -> str:
    return f"{IMAGES}/{i:06d}_f{k:03d}.png"


def _finish(canvas: Canvas, resolution: int) -> Canvas:
    if resolution == canvas.width:
        return canvas
    return downscale(canvas, resolution, resolution)


def build_sample(config: TaskConfig, i: int):
    """Record plus ``{relative path: png bytes}`` for sample ``i``."""
    seed = sample_seed(config.seed, i)
    label = i % 2
    style = make_style(config.style)
    inst = make_instance(config.task, config.size, label, make_rng(seed),
                         config.regime, RENDER_SIZE)
    sched = frame_schedule(inst)
    params = config.params()
    files = {}
    image = _finish(render_frame(inst, frozenset(), style), config.resolution)
    if config.mask_prob is not None:
        mask_key = stable_hash(config.seed, i, MASK_STREAM)
        image, mask = patch_mask(image, config.mask_prob, make_rng(mask_key))
        params["mask_key"] = mask_key
        params["masked_patches"] = int(mask.sum())
    files[input_name(i)] = encode_png(image)
    if config.frames == "multi":
        ks = range(1, len(sched) + 1)
    elif config.frames == "single":
        ks = [len(sched)]
    else:
        ks = []
    frame_paths = []
    for k in ks:
        name = frame_name(i, k)
        files[name] = encode_png(_finish(render_frame(inst, sched[k - 1], style),
                                         config.resolution))
        frame_paths.append(name)
    is_maze = isinstance(inst, MazeInstance)
    record = ManifestRecord(
        id=i, task=config.task, label=label, sample_seed=seed, params=params,
        input_path=input_name(i), frame_paths=frame_paths, num_frames=len(sched),
        d_target=inst.d_target if is_maze else None,
        d_max=inst.d_max if is_maze else None,
        split=config.split, regime=config.regime if is_maze else "main",
    )
    return record, files


def _build_job(args):
    return build_sample(*args)


def generate_dataset(config: TaskConfig, out_dir, workers: int = 1, ids=None) -> str:
    """Write ``config.count`` samples (or just ``ids``) and the manifest.

    Output is byte-identical for any ``workers``.  Files written by a failed
    run are removed before the error propagates.
    """
    ids = list(range(config.count)) if ids is None else sorted(ids)
    os.makedirs(os.path.join(out_dir, IMAGES), exist_ok=True)
    written = []
    records = []
    try:
        jobs = [(config, i) for i in ids]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                chunk = max(1, len(jobs) // (4 * workers))
                results = pool.map(_build_job, jobs, chunksize=chunk)
                for record, files in results:
                    _write_files(out_dir, files, written)
                    records.append(record)
        else:
            for job in jobs:
                record, files = _build_job(job)
                _write_files(out_dir, files, written)
                records.append(record)
        path = os.path.join(out_dir, MANIFEST)
        written.append(path)
        write_manifest(path, records)
    except BaseException:
        for p in written:
            if os.path.exists(p):
                os.remove(p)
        raise
    return path


def _write_files(out_dir, files, written):
    for rel, data in files.items():
        path = os.path.join(out_dir, rel)
        written.append(path)
        with open(path, "wb") as fh:
            fh.write(data)


def write_manifest(path, records) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in sorted(records, key=lambda r: r.id):
            fh.write(rec.to_json() + "\n")


def read_manifest(path) -> list[ManifestRecord]:
    with open(path, encoding="utf-8") as fh:
        return [ManifestRecord(**json.loads(line)) for line in fh if line.strip()]


def config_from_record(rec: ManifestRecord) -> TaskConfig:
    p = rec.params
    return TaskConfig(task=rec.task, size=p["size"], count=0,
                      regime=rec.regime, frames=p["frames"], resolution=p["resolution"],
                      split=rec.split, style=p.get("style", {}))


def regenerate_record(rec: ManifestRecord):
    """Re-render one sample from its manifest row: (input canvas, frame canvases)."""
    if rec.sample_seed is None:
        raise ParameterError("record has no sample seed")
    config = config_from_record(rec)
    style = make_style(config.style)
    inst = make_instance(rec.task, config.size, rec.label, make_rng(rec.sample_seed),
                         config.regime, RENDER_SIZE)
    sched = frame_schedule(inst)
    image = _finish(render_frame(inst, frozenset(), style), config.resolution)
    if "mask_key" in rec.params:
        image, _ = patch_mask(image, rec.params["mask_prob"], make_rng(rec.params["mask_key"]))
    ks = {"multi": range(1, len(sched) + 1), "single": [len(sched)], "none": []}[config.frames]
    frames = [_finish(render_frame(inst, sched[k - 1], style), config.resolution) for k in ks]
    return inst, image, frames


def export_masked_variant(manifest_path, p: float, seed: int, out_dir) -> str:
    """Copy a 224x224 dataset with every input image patch-masked.

    Sample ``id`` is masked with the rng keyed by ``stable_hash(seed, id)``;
    frames are copied unchanged.
    """
    src_dir = os.path.dirname(os.path.abspath(manifest_path))
    records = read_manifest(manifest_path)
    for rec in records:
        if rec.params.get("resolution") != MASK_SIZE:
            raise ParameterError("masked variants need a 224x224 source dataset")
    os.makedirs(os.path.join(out_dir, IMAGES), exist_ok=True)
    out = []
    for rec in records:
        image = load_image(os.path.join(src_dir, rec.input_path))
        mask_key = stable_hash(seed, rec.id)
        masked, mask = patch_mask(image, p, make_rng(mask_key))
        with open(os.path.join(out_dir, rec.input_path), "wb") as fh:
            fh.write(encode_png(masked))
        for fp in rec.frame_paths:
            shutil.copyfile(os.path.join(src_dir, fp), os.path.join(out_dir, fp))
        params = dict(rec.params, mask_prob=p, mask_key=mask_key,
                      masked_patches=int(mask.sum()))
        out.append(ManifestRecord(**{**asdict(rec), "params": params}))
    path = os.path.join(out_dir, MANIFEST)
    write_manifest(path, out)
    return path


@dataclass
class ScoreReport:
    label_accuracy: float
    halt_step_exact: Optional[float]
    mean_frame_mse: Optional[float]
    coverage: float
    samples: int


def frame_mse(a: Canvas, b: Canvas) -> float:
    """Per-pixel squared error with channels scaled to [0, 1]."""
    if a.pixels.shape != b.pixels.shape:
        raise ParameterError(f"frame shapes differ: {a.pixels.shape} vs {b.pixels.shape}")
    d = (a.pixels.astype(np.float64) - b.pixels.astype(np.float64)) / 255.0
    return float(np.mean(d * d))


def read_predictions(path) -> tuple[dict, str]:
    """Predictions file rows ``{"id", "label", "halt_step"?, "frames"?}``."""
    if os.path.isdir(path):
        path = os.path.join(path, "predictions.jsonl")
    base = os.path.dirname(os.path.abspath(path))
    preds = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                row = json.loads(line)
                preds[int(row["id"])] = row
    return preds, base


def score_predictions(manifest_path, predictions) -> ScoreReport:
    """Compare predictions with the manifest ground truth.

    Missing samples count as wrong labels and lower ``coverage``.  Halt and
    frame scores only cover samples that supplied them; predicted frame ``j``
    (paths relative to the predictions file) is compared with ground-truth
    frame ``j`` of the record.
    """
    records = read_manifest(manifest_path)
    root = os.path.dirname(os.path.abspath(manifest_path))
    preds, base = read_predictions(predictions)
    correct = covered = 0
    halts = []
    errors = []
    for rec in records:
        row = preds.get(rec.id)
        if row is None:
            continue
        covered += 1
        correct += int(int(row["label"]) == rec.label)
        if row.get("halt_step") is not None:
            halts.append(int(row["halt_step"]) == rec.num_frames)
        for pred_path, true_path in zip(row.get("frames") or [], rec.frame_paths):
            errors.append(frame_mse(load_image(os.path.join(base, pred_path)),
                                    load_image(os.path.join(root, true_path))))
    n = len(records)
    return ScoreReport(
        label_accuracy=correct / n if n else 0.0,
        halt_step_exact=sum(halts) / len(halts) if halts else None,
        mean_frame_mse=float(np.mean(errors)) if errors else None,
        coverage=covered / n if n else 0.0,
        samples=n,
    )

