import json
import os

import numpy as np
import pytest

from visual_scratchpad import dataset
from visual_scratchpad.core import ParameterError
from visual_scratchpad.dataset import (ManifestRecord, TaskConfig, export_masked_variant,
                                       frame_mse, generate_dataset, read_manifest,
                                       regenerate_record, score_predictions)
from visual_scratchpad.globality import patch_mask
from visual_scratchpad.raster import GRAY, Canvas, encode_png, load_image, save_image
from visual_scratchpad.rng import make_rng


def tree_bytes(root):
    out = {}
    for dirpath, _, names in os.walk(root):
        for name in names:
            path = os.path.join(dirpath, name)
            with open(path, "rb") as fh:
                out[os.path.relpath(path, root)] = fh.read()
    return out


@pytest.fixture(scope="module")
def small_cycles(tmp_path_factory):
    out = tmp_path_factory.mktemp("cycles")
    config = TaskConfig(task="cycles", size=8, count=40, seed=5, resolution=224)
    return config, generate_dataset(config, out)


def test_balance_and_layout(small_cycles):
    _, manifest = small_cycles
    records = read_manifest(manifest)
    assert [r.id for r in records] == list(range(40))
    assert sum(r.label for r in records) == 20
    assert [r.label for r in records[:4]] == [0, 1, 0, 1]
    root = os.path.dirname(manifest)
    for r in records:
        assert os.path.exists(os.path.join(root, r.input_path))
        assert len(r.frame_paths) == r.num_frames == (5 if r.label else 3)
        assert all(os.path.exists(os.path.join(root, p)) for p in r.frame_paths)
        assert r.params == {"size": 8, "n_half": 4, "resolution": 224, "frames": "multi"}
        assert load_image(os.path.join(root, r.input_path)).width == 224


def test_manifest_key_order(small_cycles):
    line = open(small_cycles[1]).readline()
    assert list(json.loads(line)) == ["id", "task", "label", "sample_seed", "params",
                                      "input_path", "frame_paths", "num_frames",
                                      "d_target", "d_max", "split", "regime"]


def test_rerun_is_byte_identical(small_cycles, tmp_path):
    config, manifest = small_cycles
    generate_dataset(config, tmp_path)
    assert tree_bytes(tmp_path) == tree_bytes(os.path.dirname(manifest))


def test_single_sample_regeneration(tmp_path):
    config = TaskConfig(task="maze-rect", size=12, count=40, seed=3, regime="easy")
    full = tmp_path / "full"
    generate_dataset(config, full)
    generate_dataset(config, tmp_path / "one", ids=[37])
    one = tree_bytes(tmp_path / "one")
    whole = tree_bytes(full)
    assert {k for k in one if k.startswith("images")} == {
        k for k in whole if k.startswith("images/000037")}
    for k in one:
        if k.startswith("images"):
            assert one[k] == whole[k]
    rec = read_manifest(full / "manifest.jsonl")[37]
    inst, image, frames = regenerate_record(rec)
    assert encode_png(image) == whole[rec.input_path]
    assert [encode_png(f) for f in frames] == [whole[p] for p in rec.frame_paths]
    assert rec.d_target is not None and 10 <= rec.d_target <= 30


def test_workers_do_not_change_output(tmp_path):
    config = TaskConfig(task="strings", size=8, count=8, seed=1, frames="single")
    generate_dataset(config, tmp_path / "a", workers=1)
    generate_dataset(config, tmp_path / "b", workers=2)
    assert tree_bytes(tmp_path / "a") == tree_bytes(tmp_path / "b")
    recs = read_manifest(tmp_path / "a" / "manifest.jsonl")
    assert all(len(r.frame_paths) == 1 for r in recs)


def test_frames_none(tmp_path):
    config = TaskConfig(task="maze-circ", size=6, count=2, frames="none", regime="easy")
    recs = read_manifest(generate_dataset(config, tmp_path))
    assert all(r.frame_paths == [] and r.num_frames >= 1 for r in recs)


def test_failure_removes_partial_output(tmp_path, monkeypatch):
    real = dataset.build_sample

    def flaky(config, i):
        if i == 3:
            raise OSError("disk full")
        return real(config, i)

    monkeypatch.setattr(dataset, "build_sample", flaky)
    with pytest.raises(OSError):
        generate_dataset(TaskConfig(task="cycles", size=6, count=6), tmp_path)
    assert list((tmp_path / "images").iterdir()) == []
    assert not (tmp_path / "manifest.jsonl").exists()


@pytest.mark.parametrize("kwargs", [
    {"count": 3}, {"task": "hexes"}, {"task": "cycles", "size": 7},
    {"resolution": 300}, {"frames": "some"}, {"regime": "hard"},
    {"mask_prob": 0.2}, {"mask_prob": 2.0, "resolution": 224},
    {"style": {"edge_width": 0}},
])
def test_config_validation(kwargs):
    with pytest.raises(ParameterError):
        TaskConfig(**kwargs)


def test_inline_masking(tmp_path):
    config = TaskConfig(task="cycles", size=8, count=4, resolution=224, mask_prob=0.5,
                        frames="none")
    recs = read_manifest(generate_dataset(config, tmp_path))
    for r in recs:
        img = load_image(tmp_path / r.input_path)
        # strokes averaged down to 224 can be gray too, so this is a lower bound
        assert img.count(GRAY) >= 256 * r.params["masked_patches"]
        _, again, _ = regenerate_record(r)
        assert again == img


def test_masked_variant(small_cycles, tmp_path):
    _, manifest = small_cycles
    src = tree_bytes(os.path.dirname(manifest))
    same = export_masked_variant(manifest, 0.0, 1, tmp_path / "p0")
    copied = tree_bytes(tmp_path / "p0")
    assert all(copied[k] == src[k] for k in copied if k.startswith("images"))
    assert len(read_manifest(same)) == 40
    masked = read_manifest(export_masked_variant(manifest, 0.4, 1, tmp_path / "p4"))
    assert len(masked) == 40
    frac = np.mean([r.params["masked_patches"] / 196 for r in masked])
    assert abs(frac - 0.4) <= 3 * np.sqrt(0.4 * 0.6 / (196 * 40))
    for r in masked[:5]:
        source = load_image(os.path.join(os.path.dirname(manifest), r.input_path))
        again, mask = patch_mask(source, 0.4, make_rng(r.params["mask_key"]))
        assert int(mask.sum()) == r.params["masked_patches"]
        assert load_image(tmp_path / "p4" / r.input_path) == again


def test_masked_variant_needs_224(tmp_path):
    manifest = generate_dataset(TaskConfig(task="cycles", size=6, count=2), tmp_path / "big")
    with pytest.raises(ParameterError):
        export_masked_variant(manifest, 0.3, 0, tmp_path / "out")


def write_predictions(path, rows):
    with open(path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def test_score_ground_truth_and_flipped(small_cycles, tmp_path):
    _, manifest = small_cycles
    root = os.path.dirname(manifest)
    recs = read_manifest(manifest)
    truth = [{"id": r.id, "label": r.label, "halt_step": r.num_frames,
              "frames": [os.path.join(root, p) for p in r.frame_paths]} for r in recs]
    write_predictions(tmp_path / "predictions.jsonl", truth)
    rep = score_predictions(manifest, tmp_path)
    assert (rep.label_accuracy, rep.halt_step_exact, rep.mean_frame_mse, rep.coverage) == (
        1.0, 1.0, 0.0, 1.0)
    flipped = [{"id": r.id, "label": 1 - r.label} for r in recs[:30]]
    write_predictions(tmp_path / "flip.jsonl", flipped)
    rep = score_predictions(manifest, tmp_path / "flip.jsonl")
    assert rep.label_accuracy == 0.0 and rep.coverage == 0.75
    assert rep.halt_step_exact is None and rep.mean_frame_mse is None


def test_frame_mse_by_hand(tmp_path):
    truth = Canvas(np.array([[[0, 0, 0], [255, 255, 255]],
                             [[0, 0, 255], [255, 0, 0]]], dtype=np.uint8))
    white = Canvas.blank(2)
    # squared channel errors: 3 + 0 + 2 + 2 = 7 over 12 channel values
    assert frame_mse(white, truth) == pytest.approx(7 / 12)
    os.makedirs(tmp_path / "images")
    save_image(truth, tmp_path / "images" / "t.png")
    save_image(white, tmp_path / "w.png")
    rec = ManifestRecord(0, "cycles", 1, 0, {}, "images/t.png", ["images/t.png"], 1,
                         None, None, "test", "main")
    with open(tmp_path / "manifest.jsonl", "w") as fh:
        fh.write(rec.to_json() + "\n")
    write_predictions(tmp_path / "predictions.jsonl",
                      [{"id": 0, "label": 1, "frames": ["w.png"]}])
    rep = score_predictions(tmp_path / "manifest.jsonl", tmp_path)
    assert rep.mean_frame_mse == pytest.approx(7 / 12)
    with pytest.raises(ParameterError):
        frame_mse(Canvas.blank(2), Canvas.blank(3))
