"""Command-line interface: subcommands, exit codes, file outputs."""

import json
import os

import numpy as np
import pytest

from gaitpath import cli, dcs, ecoc
from gaitpath.segmentation import read_image
from gaitpath.states import StateLabel, classes_for


def run(argv):
    return cli.main(argv)


def read_tree_bytes(root):
    out = {}
    for dirpath, _, filenames in os.walk(root):
        for name in filenames:
            path = os.path.join(dirpath, name)
            out[os.path.relpath(path, root)] = open(path, "rb").read()
    return out


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Synthesize a tiny corpus + walk and train a bank once for the module."""
    root = tmp_path_factory.mktemp("cli")
    out = root / "synth"
    code = run(["synth", "--output-dir", str(out), "--per-class", "1",
                "--noise", "0.02", "--walk", "straight",
                "--frames-per-pose", "2", "--cycles", "2", "--seed", "3"])
    assert code == 0
    model_dir = root / "models"
    code = run(["train", "--dataset-dir", str(out / "dataset"),
                "--model-dir", str(model_dir), "--seed", "3"])
    assert code == 0
    return root


def test_synth_writes_expected_tree(workspace):
    dataset = workspace / "synth" / "dataset"
    class_dirs = sorted(os.listdir(dataset))
    assert len(class_dirs) == 64
    assert "P1_V1" in class_dirs and "P8_V8" in class_dirs
    for d in class_dirs:
        files = os.listdir(dataset / d)
        assert files == ["0000.pgm"]
    img = read_image(dataset / "P1_V3" / "0000.pgm")
    assert img.shape == (160, 96)

    frames = sorted(os.listdir(workspace / "synth" / "walk" / "frames"))
    assert len(frames) == 32  # 2 cycles x 8 poses x 2 frames
    truth = (workspace / "synth" / "walk" / "truth.csv").read_text().splitlines()
    assert truth[0] == "frame,pose,viewpoint"
    assert len(truth) == 33


def test_synth_is_reproducible(workspace, tmp_path):
    rerun = tmp_path / "again"
    code = run(["synth", "--output-dir", str(rerun), "--per-class", "1",
                "--noise", "0.02", "--walk", "straight",
                "--frames-per-pose", "2", "--cycles", "2", "--seed", "3"])
    assert code == 0
    assert read_tree_bytes(rerun) == read_tree_bytes(workspace / "synth")


def test_train_writes_bank(workspace):
    model_dir = workspace / "models"
    names = sorted(os.listdir(model_dir))
    ecoc_files = [n for n in names if n.endswith(".ecoc")]
    assert len(ecoc_files) == 65
    assert "manifest.txt" in names

    c64 = ecoc.load_model(model_dir / "c64.ecoc")
    assert c64.coding.n_classes == 64
    assert c64.coding.n_learners == 2016
    assert c64.feature_dim == 32292

    # the selector at (4, 5) recognizes exactly its admissible continuations
    c4 = ecoc.load_model(model_dir / "c4_4_5.ecoc")
    assert tuple(c4.coding.class_labels) == classes_for(4, 5)


def test_bank_reload_decodes_identically(workspace):
    bank, q = dcs.load_bank(workspace / "models")
    assert q == 4
    rng = np.random.default_rng(149)
    probe = rng.random(32292)
    again, _ = dcs.load_bank(workspace / "models")
    a, la = ecoc.decode(bank.c64, probe)
    b, lb = ecoc.decode(again.c64, probe)
    assert a == b and np.array_equal(la, lb)


def test_track_runs_pipeline(workspace, tmp_path):
    out = tmp_path / "out"
    code = run(["track", str(workspace / "synth" / "walk" / "frames"),
                "--model-dir", str(workspace / "models"),
                "--output-dir", str(out)])
    assert code == 0
    assert sorted(os.listdir(out)) == ["skeletons.jsonl", "states.csv",
                                       "trajectory.csv", "trajectory.svg"]
    states = cli.read_states_csv(out / "states.csv")
    assert len(states) == 32
    assert all(isinstance(s, StateLabel) for s in states)
    rows = (out / "trajectory.csv").read_text().splitlines()
    assert rows[0] == "frame,pose,viewpoint,x,y,heading,contact"
    first_frame = int(rows[1].split(",")[0])
    assert first_frame == 4  # path starts at the last initialization frame


def test_track_empty_frame_dir_is_data_error(workspace, tmp_path):
    empty = tmp_path / "frames"
    empty.mkdir()
    code = run(["track", str(empty), "--model-dir", str(workspace / "models"),
                "--output-dir", str(tmp_path / "out")])
    assert code == 2


def test_track_uncorrectable_elevation(workspace, tmp_path):
    code = run(["track", str(workspace / "synth" / "walk" / "frames"),
                "--model-dir", str(workspace / "models"),
                "--output-dir", str(tmp_path / "out"), "--phi", "60"])
    assert code == 2


def test_eval_truth_against_itself_is_zero(workspace, tmp_path):
    truth = str(workspace / "synth" / "walk" / "truth.csv")
    out = tmp_path / "eval"
    code = run(["eval", truth, truth, "--output-dir", str(out)])
    assert code == 0
    payload = json.loads((out / "report.json").read_text())
    assert payload["e_pose_with_te"] == 0.0
    assert payload["e_view_no_te"] == 0.0
    assert payload["frame_count"] == 32
    assert (out / "confusion.svg").exists()


def test_eval_missing_file_is_data_error(tmp_path):
    code = run(["eval", str(tmp_path / "nope.csv"), str(tmp_path / "nope.csv"),
                "--output-dir", str(tmp_path)])
    assert code == 2


def test_plot_from_saved_outputs(workspace, tmp_path):
    truth = str(workspace / "synth" / "walk" / "truth.csv")
    eval_out = tmp_path / "eval"
    assert run(["eval", truth, truth, "--output-dir", str(eval_out)]) == 0
    plot_out = tmp_path / "plots"
    code = run(["plot", "--trajectory", truth,
                "--report", str(eval_out / "report.json"),
                "--output-dir", str(plot_out)])
    assert code == 0
    assert (plot_out / "trajectory.svg").exists()
    assert (plot_out / "confusion.svg").exists()


def test_plot_without_inputs_is_data_error(tmp_path):
    assert run(["plot", "--output-dir", str(tmp_path)]) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        run(["bogus"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        run([])
    assert err.value.code == 1


def test_config_file_and_override(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("per_class = 1\nnoise = 0.0\nseed = 11\n")
    out = tmp_path / "synth"
    code = run(["synth", "--config", str(cfg_file), "--output-dir", str(out)])
    assert code == 0
    assert len(os.listdir(out / "dataset")) == 64

    bad = tmp_path / "bad.cfg"
    bad.write_text("no_such_key = 1\n")
    assert run(["synth", "--config", str(bad), "--output-dir", str(out)]) == 2


def test_invalid_config_value_is_data_error(tmp_path):
    assert run(["synth", "--output-dir", str(tmp_path / "x"),
                "--per-class", "0"]) == 2
