"""Command line front end.

Exit codes: 0 success, 2 usage error, 3 generation error, 4 scoring
coverage below ``--min-coverage``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict

from .core import BudgetExceededError, ContractError, ParameterError
from .dataset import (FRAME_MODES, RESOLUTIONS, TaskConfig, export_masked_variant,
                      generate_dataset, read_manifest, regenerate_record, score_predictions)
from .globality import exact_mi_profile, monte_carlo_mi
from .maze import REGIMES, MazeInstance, maze_stop_distance
from .oracle import run_to_halt, write_teacher_forcing
from .raster import load_image, save_image
from .rng import make_rng, sample_seed
from .tasks import DEFAULT_SIZES, TASKS, make_instance

EXIT_USAGE, EXIT_GENERATION, EXIT_COVERAGE = 2, 3, 4

CONFIG_KEYS = {"task": str, "size": int, "count": int, "seed": int, "regime": str,
               "frames": str, "resolution": int, "out": str, "mask-prob": float,
               "workers": int, "split": str}


def read_config_file(path) -> dict:
    """Flat ``key = value`` lines named like the long flags; ``#`` comments."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{n}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ParameterError(f"{path}:{n}: unknown key {key!r}")
            out[key.replace("-", "_")] = CONFIG_KEYS[key](value)
    return out


def _task_flags(p, count=True):
    p.add_argument("--task", choices=TASKS)
    p.add_argument("--size", type=int, help="benchmark size: 2n for cycles/strings, "
                   "grid side for maze-rect, rings for maze-circ")
    p.add_argument("--seed", type=int)
    p.add_argument("--regime", choices=REGIMES)
    if count:
        p.add_argument("--count", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="visual-scratchpad")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a dataset directory")
    _task_flags(p)
    p.add_argument("--frames", choices=FRAME_MODES)
    p.add_argument("--resolution", type=int, choices=RESOLUTIONS)
    p.add_argument("--out")
    p.add_argument("--mask-prob", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--split")
    p.add_argument("--config", help="flat key = value file; flags override it")

    p = sub.add_parser("mask", help="patch-mask the inputs of a 224px dataset")
    p.add_argument("--manifest", required=True)
    p.add_argument("--mask-prob", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("oracle-run", help="run the scratchpad oracle on one sample")
    _task_flags(p, count=False)
    p.add_argument("--id", type=int, default=0, help="sample index (label = id %% 2)")
    p.add_argument("--out", help="also write teacher-forcing frames and index here")

    p = sub.add_parser("probe", help="mutual information of revealed nodes vs label")
    p.add_argument("--size", type=int, default=6, help="cycles size 2n")
    p.add_argument("--samples", type=int, default=0, help="Monte Carlo draws; 0 = exact")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("score", help="score external predictions against a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--min-coverage", type=float, default=1.0)

    p = sub.add_parser("inspect", help="re-render one sample and compare with its files")
    p.add_argument("--manifest", required=True)
    p.add_argument("--id", type=int, required=True)
    p.add_argument("--out", help="write the re-rendered images here")
    return parser


def _generate(args) -> int:
    settings = {"task": "cycles", "seed": 0, "count": 100, "regime": "main",
                "frames": "multi", "resolution": 448, "out": "dataset", "workers": 1,
                "split": "train", "mask_prob": None, "size": None}
    if args.config:
        settings.update(read_config_file(args.config))
    for key in settings:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    out, workers = settings.pop("out"), settings.pop("workers")
    config = TaskConfig(**settings)
    path = generate_dataset(config, out, workers=workers)
    print(json.dumps({"manifest": path, "samples": config.count, "task": config.task,
                      "size": config.size}))
    return 0


def _oracle_run(args) -> int:
    task = args.task or "cycles"
    size = args.size or DEFAULT_SIZES[task]
    seed = sample_seed(args.seed or 0, args.id)
    inst = make_instance(task, size, args.id % 2, make_rng(seed), args.regime or "main")
    run = run_to_halt(inst)
    for state in run.frames[1:]:
        print(f"step {state.step_index}: colored={len(state.colored_set)}")
    summary = {"task": task, "size": size, "id": args.id, "sample_seed": seed,
               "label": run.label, "true_label": inst.label, "steps": run.steps_taken}
    if isinstance(inst, MazeInstance):
        d_stop = maze_stop_distance(inst)
        summary.update(d_stop=d_stop, expected_steps=max(1, math.ceil(d_stop / 10)))
    print(json.dumps(summary))
    if args.out:
        write_teacher_forcing(inst, f"{args.id:06d}", args.out)
    return 0


def _probe(args) -> int:
    if args.size % 2:
        raise ParameterError("--size is the node count 2n and must be even")
    n_half = args.size // 2
    if args.samples:
        rng = make_rng(args.seed)
        for k in range(args.size + 1):
            est = monte_carlo_mi(n_half, k, args.samples, rng)
            print(f"k={k}\tmi_bits={est.bits:.6f}\tstderr={est.stderr:.6f}")
    else:
        for k, mi in exact_mi_profile(n_half).items():
            print(f"k={k}\tmi_bits={mi:.6f}")
    return 0


def _score(args) -> int:
    report = score_predictions(args.manifest, args.predictions)
    print(json.dumps(asdict(report)))
    return 0 if report.coverage >= args.min_coverage else EXIT_COVERAGE


def _inspect(args) -> int:
    root = os.path.dirname(os.path.abspath(args.manifest))
    rec = next((r for r in read_manifest(args.manifest) if r.id == args.id), None)
    if rec is None:
        raise ParameterError(f"no sample with id {args.id}")
    _, image, frames = regenerate_record(rec)
    match = load_image(os.path.join(root, rec.input_path)) == image and all(
        load_image(os.path.join(root, p)) == f for p, f in zip(rec.frame_paths, frames))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        save_image(image, os.path.join(args.out, os.path.basename(rec.input_path)))
        for p, f in zip(rec.frame_paths, frames):
            save_image(f, os.path.join(args.out, os.path.basename(p)))
    print(json.dumps({"record": asdict(rec), "match": match}))
    return 0 if match else EXIT_GENERATION


def _mask(args) -> int:
    print(json.dumps({"manifest": export_masked_variant(args.manifest, args.mask_prob,
                                                        args.seed, args.out)}))
    return 0


COMMANDS = {"generate": _generate, "mask": _mask, "oracle-run": _oracle_run,
            "probe": _probe, "score": _score, "inspect": _inspect}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParameterError, ContractError, BudgetExceededError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERATION


if __name__ == "__main__":
    sys.exit(main())
